#include "gibbs/cli/config.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "toml.hpp"

#include "gibbs/errors.hpp"
#include "gibbs/planning.hpp"

namespace gibbs::cli {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

void reject_unknown(const json& j, const std::set<std::string>& known, const std::string& where) {
  for (const auto& [key, value] : j.items()) {
    if (!known.count(key)) throw ParameterError("unknown key '" + key + "' in " + where);
  }
}

template <class T>
T get(const json& j, const char* key, const std::string& where) {
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ParameterError(where + "." + key + ": " + e.what());
  }
}

template <class T>
void maybe(const json& j, const char* key, T& out, const std::string& where) {
  if (j.contains(key)) out = get<T>(j, key, where);
}

std::size_t count_field(const json& j, const char* key, const std::string& where) {
  const auto v = get<long long>(j, key, where);
  if (v < 0) throw ParameterError(where + "." + key + " must be non-negative");
  return static_cast<std::size_t>(v);
}

void maybe_count(const json& j, const char* key, std::size_t& out, const std::string& where) {
  if (j.contains(key)) out = count_field(j, key, where);
}

Domain parse_box(const json& root) {
  const json& box = root.at("box");
  std::optional<std::size_t> dim;
  if (root.contains("dimension")) dim = count_field(root, "dimension", "config");
  if (box.is_number()) return Domain(std::vector<double>(dim.value_or(1), box.get<double>()));
  auto sides = get<std::vector<double>>(root, "box", "config");
  if (dim && *dim != sides.size()) throw ParameterError("config: dimension does not match the box");
  return Domain(std::move(sides));
}

PairPotential parse_potential(const json& p) {
  const std::string where = "potential";
  const auto kind = get<std::string>(p, "kind", where);
  if (kind == "hard_sphere") {
    reject_unknown(p, {"kind", "radius"}, where);
    return PairPotential::hard_sphere(get<double>(p, "radius", where));
  }
  if (kind == "soft_core") {
    reject_unknown(p, {"kind", "strength", "range"}, where);
    return PairPotential::soft_core(get<double>(p, "strength", where), get<double>(p, "range", where));
  }
  if (kind == "none") {
    reject_unknown(p, {"kind", "range"}, where);
    return PairPotential::none(p.contains("range") ? get<double>(p, "range", where) : 1.0);
  }
  throw ParameterError("potential.kind must be hard_sphere, soft_core or none");
}

std::vector<Point> parse_points(const json& arr, const std::string& where) {
  if (!arr.is_array()) throw ParameterError(where + " must be a list of points");
  std::vector<Point> pts;
  for (const auto& p : arr) {
    if (p.is_number()) {
      pts.push_back(Point{p.get<double>()});
    } else {
      pts.emplace_back(Point(p.get<std::vector<double>>()));
    }
  }
  return pts;
}

Configuration parse_initial(const json& init, const std::string& base_dir) {
  if (init.is_string()) {
    if (init.get<std::string>() != "empty") throw ParameterError("initial must be \"empty\", a point list or {file}");
    return {};
  }
  if (init.is_array()) return Configuration::from_points(parse_points(init, "initial"));
  if (init.is_object()) {
    reject_unknown(init, {"file"}, "initial");
    std::filesystem::path path = get<std::string>(init, "file", "initial");
    if (path.is_relative()) path = std::filesystem::path(base_dir) / path;
    std::ifstream in(path);
    if (!in) throw ParameterError("cannot open initial configuration file '" + path.string() + "'");
    json doc;
    try {
      doc = json::parse(in);
    } catch (const json::exception& e) {
      throw ParameterError("initial configuration file '" + path.string() + "': " + e.what());
    }
    if (doc.is_object() && doc.contains("points")) doc = doc.at("points");
    return Configuration::from_points(parse_points(doc, path.string()));
  }
  throw ParameterError("initial must be \"empty\", a point list or {file}");
}

ordered_json potential_json(const PairPotential& phi) {
  ordered_json j;
  if (phi.is_hard_sphere()) {
    j["kind"] = "hard_sphere";
    j["radius"] = phi.radius();
  } else {
    j["kind"] = "soft_core";
    j["strength"] = phi.strength();
    j["range"] = phi.range();
  }
  return j;
}

ordered_json points_json(const Configuration& eta) {
  ordered_json pts = ordered_json::array();
  for (const auto& p : eta.particles()) {
    pts.push_back(std::vector<double>(p.position.coords().begin(), p.position.coords().end()));
  }
  return pts;
}

}  // namespace

void RunConfig::check_time_mode() const {
  if (horizon && (epsilon || gamma)) throw ParameterError("give either T or (epsilon, gamma), not both");
  if (!horizon && !(epsilon && gamma)) throw ParameterError("give either T or both epsilon and gamma");
  if (horizon && !(*horizon >= 0.0 && std::isfinite(*horizon))) throw ParameterError("T must be finite and >= 0");
}

double RunConfig::resolved_horizon() const {
  check_time_mode();
  if (horizon) return *horizon;
  return plan_time(*epsilon, initial.size(), *gamma, activity * domain.volume());
}

ordered_json RunConfig::to_json() const {
  ordered_json j;
  j["box"] = std::vector<double>(domain.sides().begin(), domain.sides().end());
  j["potential"] = potential_json(potential);
  j["activity"] = activity;
  if (horizon) j["T"] = *horizon;
  if (epsilon) j["epsilon"] = *epsilon;
  if (gamma) j["gamma"] = *gamma;
  j["initial"] = points_json(initial);
  j["chains"] = chains;
  j["seed"] = seed;
  j["canonical"] = {{"k", canonical.k},
                    {"delta", canonical.delta},
                    {"certified", canonical.certified},
                    {"max_attempts", canonical.max_attempts},
                    {"n_pilot", canonical.n_pilot}};
  ordered_json v = {{"chains", validate.chains},
                    {"n_x", validate.n_x},
                    {"k", validate.k},
                    {"survivor_time", validate.survivor_time},
                    {"survivor_count", validate.survivor_count},
                    {"relaxation_horizon", validate.relaxation_horizon},
                    {"relaxation_dt", validate.relaxation_dt},
                    {"relaxation_lags", validate.relaxation_lags}};
  if (validate.influence_x) {
    v["influence_x"] = std::vector<double>(validate.influence_x->coords().begin(), validate.influence_x->coords().end());
  }
  j["validate"] = v;
  ordered_json l = {{"tau", localize.tau}, {"runs", localize.runs}, {"k", localize.k}, {"variance_k", localize.variance_k}};
  if (localize.lambda1) l["lambda1"] = *localize.lambda1;
  if (localize.delta) l["delta"] = *localize.delta;
  j["localize"] = l;
  j["bench"] = {{"lengths", bench.lengths},
                {"events", bench.events},
                {"repeats", bench.repeats},
                {"burn_in", bench.burn_in}};
  return j;
}

std::uint64_t fnv1a64(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string RunConfig::hash() const {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a64(to_json().dump())));
  return buf;
}

std::string format_double(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

RunConfig config_from_json(const json& j, const std::string& base_dir) {
  if (!j.is_object()) throw ParameterError("config must be an object");
  reject_unknown(j,
                 {"dimension", "box", "potential", "activity", "T", "epsilon", "gamma", "initial", "chains", "seed", "out",
                  "format", "canonical", "validate", "localize", "bench"},
                 "config");
  RunConfig c;
  if (j.contains("box")) {
    c.domain = parse_box(j);
  } else if (j.contains("dimension")) {
    throw ParameterError("config: dimension given without box");
  }
  if (j.contains("potential")) c.potential = parse_potential(j.at("potential"));
  maybe(j, "activity", c.activity, "config");
  if (!(c.activity >= 0.0) || !std::isfinite(c.activity)) throw ParameterError("activity must be finite and >= 0");
  if (j.contains("T")) c.horizon = get<double>(j, "T", "config");
  if (j.contains("epsilon")) c.epsilon = get<double>(j, "epsilon", "config");
  if (j.contains("gamma")) c.gamma = get<double>(j, "gamma", "config");
  if (j.contains("initial")) c.initial = parse_initial(j.at("initial"), base_dir);
  maybe_count(j, "chains", c.chains, "config");
  maybe(j, "seed", c.seed, "config");
  if (j.contains("out")) c.out = get<std::string>(j, "out", "config");
  maybe(j, "format", c.format, "config");

  if (j.contains("canonical")) {
    const auto& s = j.at("canonical");
    reject_unknown(s, {"k", "delta", "certified", "max_attempts", "n_pilot"}, "canonical");
    maybe_count(s, "k", c.canonical.k, "canonical");
    maybe(s, "delta", c.canonical.delta, "canonical");
    maybe(s, "certified", c.canonical.certified, "canonical");
    maybe_count(s, "max_attempts", c.canonical.max_attempts, "canonical");
    maybe_count(s, "n_pilot", c.canonical.n_pilot, "canonical");
  }
  if (j.contains("validate")) {
    const auto& s = j.at("validate");
    reject_unknown(s,
                   {"chains", "n_x", "k", "survivor_time", "survivor_count", "influence_x", "relaxation_horizon",
                    "relaxation_dt", "relaxation_lags"},
                   "validate");
    maybe_count(s, "chains", c.validate.chains, "validate");
    maybe_count(s, "n_x", c.validate.n_x, "validate");
    maybe_count(s, "k", c.validate.k, "validate");
    maybe(s, "survivor_time", c.validate.survivor_time, "validate");
    maybe_count(s, "survivor_count", c.validate.survivor_count, "validate");
    if (s.contains("influence_x")) {
      const auto& x = s.at("influence_x");
      c.validate.influence_x = x.is_number() ? Point{x.get<double>()} : Point(x.get<std::vector<double>>());
    }
    maybe(s, "relaxation_horizon", c.validate.relaxation_horizon, "validate");
    maybe(s, "relaxation_dt", c.validate.relaxation_dt, "validate");
    maybe_count(s, "relaxation_lags", c.validate.relaxation_lags, "validate");
  }
  if (j.contains("localize")) {
    const auto& s = j.at("localize");
    reject_unknown(s, {"tau", "runs", "k", "lambda1", "variance_k", "delta"}, "localize");
    maybe(s, "tau", c.localize.tau, "localize");
    maybe_count(s, "runs", c.localize.runs, "localize");
    maybe(s, "k", c.localize.k, "localize");
    if (s.contains("lambda1")) c.localize.lambda1 = get<double>(s, "lambda1", "localize");
    maybe(s, "variance_k", c.localize.variance_k, "localize");
    if (s.contains("delta")) c.localize.delta = get<double>(s, "delta", "localize");
  }
  if (j.contains("bench")) {
    const auto& s = j.at("bench");
    reject_unknown(s, {"lengths", "events", "repeats", "burn_in"}, "bench");
    maybe(s, "lengths", c.bench.lengths, "bench");
    maybe(s, "events", c.bench.events, "bench");
    maybe_count(s, "repeats", c.bench.repeats, "bench");
    maybe(s, "burn_in", c.bench.burn_in, "bench");
  }
  if (c.format != "jsonl" && c.format != "csv") throw ParameterError("format must be jsonl or csv");
  return c;
}

RunConfig config_from_toml(const std::string& text, const std::string& base_dir) {
  toml::table tbl;
  try {
    tbl = toml::parse(text);
  } catch (const toml::parse_error& e) {
    std::ostringstream msg;
    msg << "TOML config: " << e.description() << " at line " << e.source().begin.line;
    throw ParameterError(msg.str());
  }
  std::ostringstream js;
  js << toml::json_formatter{tbl};
  return config_from_json(json::parse(js.str()), base_dir);
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParameterError("cannot open config file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  const std::filesystem::path p(path);
  const std::string base = p.has_parent_path() ? p.parent_path().string() : ".";
  if (p.extension() == ".toml") return config_from_toml(ss.str(), base);
  json j;
  try {
    j = json::parse(ss.str());
  } catch (const json::exception& e) {
    throw ParameterError("JSON config '" + path + "': " + e.what());
  }
  return config_from_json(j, base);
}

}  // namespace gibbs::cli
