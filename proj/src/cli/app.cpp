#include "gibbs/cli/app.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <limits>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "gibbs/canonical.hpp"
#include "gibbs/cli/bench.hpp"
#include "gibbs/cli/config.hpp"
#include "gibbs/errors.hpp"
#include "gibbs/glauber.hpp"
#include "gibbs/localization.hpp"
#include "gibbs/oracle.hpp"
#include "gibbs/sample_batch.hpp"
#include "gibbs/validation.hpp"

namespace gibbs::cli {

namespace {

using nlohmann::ordered_json;

const std::vector<std::string> kSuites{"tonks",     "gnz",        "ratio",      "domination", "survivors",
                                       "influence", "relaxation", "martingale", "variance"};

struct Flags {
  std::optional<std::string> config;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> chains;
  std::optional<std::string> out;
  std::optional<std::string> format;
  std::optional<std::string> suite;
  std::optional<std::string> batch;
  std::optional<double> gamma;
  std::optional<double> epsilon;
  std::optional<double> horizon;
  std::optional<std::size_t> k;
  bool certified = false;
};

RunConfig effective_config(const Flags& f) {
  RunConfig c = f.config ? load_config(*f.config) : RunConfig{};
  if (!f.config) c.horizon = 50.0;
  if (f.horizon && (f.epsilon || f.gamma)) throw ParameterError("--T cannot be combined with --epsilon/--gamma");
  if (f.horizon) {
    c.horizon = f.horizon;
    c.epsilon.reset();
    c.gamma.reset();
  }
  if (f.epsilon || f.gamma) {
    c.horizon.reset();
    if (f.epsilon) c.epsilon = f.epsilon;
    if (f.gamma) c.gamma = f.gamma;
  }
  if (f.seed) c.seed = *f.seed;
  if (f.chains) {
    c.chains = *f.chains;
    c.validate.chains = *f.chains;
  }
  if (f.out) c.out = f.out;
  if (f.format) c.format = *f.format;
  if (f.k) c.canonical.k = *f.k;
  if (f.certified) c.canonical.certified = true;
  if (c.format != "jsonl" && c.format != "csv") throw ParameterError("--format must be jsonl or csv");
  return c;
}

/// Single writer for all records of a command.
class Sink {
 public:
  Sink(const RunConfig& c, std::ostream& fallback) : os_(&fallback) {
    if (c.out) {
      file_ = std::make_unique<std::ofstream>(*c.out, std::ios::binary);
      if (!*file_) throw ParameterError("cannot open output file '" + *c.out + "'");
      os_ = file_.get();
    }
  }
  std::ostream& stream() { return *os_; }
  void record(const ordered_json& j) { *os_ << j.dump() << '\n'; }
  void flush() { os_->flush(); }

 private:
  std::unique_ptr<std::ofstream> file_;
  std::ostream* os_;
};

void add_provenance(ordered_json& j, const RunConfig& c) {
  j["config_hash"] = c.hash();
  j["version"] = kVersion;
}

ordered_json points_json(const Configuration& eta) {
  ordered_json pts = ordered_json::array();
  for (const auto& p : eta.particles()) {
    pts.push_back(std::vector<double>(p.position.coords().begin(), p.position.coords().end()));
  }
  return pts;
}

ordered_json potential_json(const PairPotential& phi) {
  if (phi.is_hard_sphere()) return {{"kind", "hard_sphere"}, {"radius", phi.radius()}};
  return {{"kind", "soft_core"}, {"strength", phi.strength()}, {"range", phi.range()}};
}

ordered_json report_json(const validation::IdentityReport& r, const RunConfig& c) {
  ordered_json j = validation::to_json(r);
  j["record"] = "report";
  j["seed"] = c.seed;
  add_provenance(j, c);
  return j;
}

GlauberParams glauber_params(const RunConfig& c, double horizon) {
  GlauberParams p{c.domain, c.potential, ActivityField(c.activity), horizon, c.initial, c.seed};
  p.validate();
  return p;
}

std::optional<localization::HardRodModel> rod_model(const RunConfig& c) {
  if (c.domain.dimension() != 1 || !c.potential.is_hard_sphere()) return std::nullopt;
  return localization::HardRodModel{c.domain.side(0), c.potential.range()};
}

// ---------------------------------------------------------------- sample

int cmd_sample(const RunConfig& c, std::ostream& out) {
  const double horizon = c.resolved_horizon();
  const GlauberParams params = glauber_params(c, horizon);
  Sink sink(c, out);
  const std::size_t d = c.domain.dimension();
  const auto start = std::chrono::steady_clock::now();

  if (c.format == "jsonl") {
    ordered_json h{{"record", "header"},
                   {"box", std::vector<double>(c.domain.sides().begin(), c.domain.sides().end())},
                   {"potential", potential_json(c.potential)},
                   {"activity", c.activity},
                   {"T", horizon}};
    if (c.epsilon) h["epsilon"] = *c.epsilon;
    if (c.gamma) h["gamma"] = *c.gamma;
    h["initial"] = points_json(c.initial);
    h["chains"] = c.chains;
    h["seed"] = c.seed;
    add_provenance(h, c);
    sink.record(h);
  } else {
    sink.stream() << "chain_index,point_index";
    for (std::size_t i = 0; i < d; ++i) sink.stream() << ",x" << i;
    sink.stream() << '\n';
  }

  std::uint64_t total_events = 0;
  constexpr std::size_t kBlock = 4096;
  std::vector<RunResult> block;
  const std::string hash = c.hash();
  for (std::size_t first = 0; first < c.chains; first += kBlock) {
    const std::size_t n = std::min(kBlock, c.chains - first);
    block.assign(n, RunResult{});
    parallel_for(n, default_worker_count(), [&](std::size_t i) { block[i] = run_chain(params, first + i); });
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t idx = first + i;
      const auto& r = block[i];
      total_events += r.stats.n_events;
      if (c.format == "jsonl") {
        sink.record({{"record", "chain"},
                     {"chain_index", idx},
                     {"seed", derive_seed(c.seed, idx)},
                     {"T", horizon},
                     {"points", points_json(r.configuration)},
                     {"n_events", r.stats.n_events},
                     {"n_attempted_births", r.stats.n_attempted_births},
                     {"config_hash", hash},
                     {"version", kVersion}});
      } else {
        std::size_t j = 0;
        for (const auto& p : r.configuration.particles()) {
          sink.stream() << idx << ',' << j++;
          for (std::size_t a = 0; a < d; ++a) sink.stream() << ',' << format_double(p.position[a]);
          sink.stream() << '\n';
        }
      }
    }
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (c.format == "jsonl") {
    sink.record({{"record", "summary"},
                 {"chains", c.chains},
                 {"total_events", total_events},
                 {"wall_time_s", secs},
                 {"events_per_sec", secs > 0 ? static_cast<double>(total_events) / secs : 0.0},
                 {"seed", c.seed},
                 {"config_hash", hash},
                 {"version", kVersion}});
  }
  sink.flush();
  return kExitOk;
}

// ---------------------------------------------------------------- canonical

int cmd_canonical(const RunConfig& c, std::ostream& out) {
  canonical::CanonicalParams p{c.canonical.k, c.activity, c.domain, c.potential};
  p.delta = c.canonical.delta;
  p.gamma = c.gamma.value_or(1.0);
  p.seed = c.seed;
  p.n_pilot = c.canonical.n_pilot;
  canonical::check_feasible(p.k, p.domain, p.potential);

  ordered_json rec{{"record", "canonical"},
                   {"mode", c.canonical.certified ? "certified" : "heuristic"},
                   {"k", p.k},
                   {"activity", p.activity},
                   {"delta", p.delta},
                   {"gamma", p.gamma},
                   {"seed", p.seed}};
  canonical::CanonicalResult r;
  if (c.canonical.certified) {
    if (p.k > 0) rec["m"] = canonical::sweep_count(p.activity * p.domain.volume(), p.gamma, p.delta);
    r = canonical::canonical_sample(p);
  } else {
    canonical::HeuristicOptions opts;
    opts.horizon = c.horizon;
    opts.max_attempts = c.canonical.max_attempts;
    r = canonical::canonical_sample_heuristic(p, opts);
  }
  rec["success"] = r.success();
  rec["index"] = r.index;
  rec["chain_activity"] = r.activity;
  rec["draws"] = r.draws;
  rec["points"] = r.success() ? points_json(*r.configuration) : ordered_json::array();
  rec["warnings"] = r.warnings;
  add_provenance(rec, c);
  Sink sink(c, out);
  sink.record(rec);
  sink.flush();
  return r.success() ? kExitOk : kExitSweepExhausted;
}

// ---------------------------------------------------------------- validate

class Validator {
 public:
  Validator(const RunConfig& c, std::optional<std::string> batch_path, bool skip_unsupported)
      : c_(c), batch_path_(std::move(batch_path)), skip_(skip_unsupported) {}

  std::vector<validation::IdentityReport> run_suite(const std::string& name);

 private:
  const SampleBatch& batch() {
    if (!batch_) {
      if (batch_path_) {
        batch_ = read_sample_batch_file(*batch_path_);
      } else {
        auto p = glauber_params(c_, c_.resolved_horizon());
        p.initial = Configuration{};
        batch_ = generate_batch(p, c_.validate.chains);
      }
    }
    return *batch_;
  }
  std::optional<localization::HardRodModel> rods(const std::string& suite) {
    auto m = rod_model(c_);
    if (!m && !skip_) throw UnsupportedError("suite " + suite + " needs a 1D hard-rod config");
    return m;
  }
  static validation::IdentityReport skipped(const std::string& test) {
    validation::IdentityReport r;
    r.test = test;
    r.pass = true;
    r.status = "skipped";
    return r;
  }

  const RunConfig& c_;
  std::optional<std::string> batch_path_;
  bool skip_;
  std::optional<SampleBatch> batch_;
};

std::vector<validation::IdentityReport> Validator::run_suite(const std::string& name) {
  using validation::IdentityReport;
  std::vector<IdentityReport> out;
  const std::uint64_t suite_seed = derive_seed(c_.seed, fnv1a64(name));

  if (name == "tonks") {
    const auto m = rods(name);
    if (!m) return {skipped(name)};
    return validation::tonks_oracle_checks({m->length, m->diameter, c_.activity});
  }
  if (name == "gnz") {
    const auto& b = batch();
    const std::size_t k = c_.validate.k;
    auto r1 = validation::gnz_residual(b, [](const Configuration&, const Point&) { return 1.0; }, c_.validate.n_x,
                                       suite_seed);
    r1.test = "gnz[F=1]";
    auto rk = validation::gnz_residual(
        b, [k](const Configuration& eta, const Point&) { return eta.size() == k ? 1.0 : 0.0; }, c_.validate.n_x,
        derive_seed(suite_seed, 1));
    rk.test = "gnz[F=1{|eta|=" + std::to_string(k) + "}]";
    return {r1, rk};
  }
  if (name == "ratio") return {validation::cardinality_ratio_check(batch(), std::max<std::size_t>(1, c_.validate.k))};
  if (name == "domination") return {validation::domination_check(batch())};
  if (name == "survivors") {
    Configuration initial = c_.initial;
    if (initial.empty()) {
      // Evenly spaced along the first axis, at least 2 * range apart, centred elsewhere.
      const double len = c_.domain.side(0);
      const double spacing_needed = 2.0 * c_.potential.range();
      std::size_t n = c_.validate.survivor_count;
      while (n > 0 && len / static_cast<double>(n) < spacing_needed) --n;
      if (n == 0) throw ParameterError("survivors: box too small for a valid initial configuration");
      std::vector<Point> pts;
      for (std::size_t i = 0; i < n; ++i) {
        Point p = Point::zeros(c_.domain.dimension());
        p[0] = (static_cast<double>(i) + 0.5) * len / static_cast<double>(n);
        for (std::size_t a = 1; a < c_.domain.dimension(); ++a) p[a] = c_.domain.side(a) / 2.0;
        pts.push_back(p);
      }
      initial = Configuration::from_points(pts);
    }
    GlauberParams p{c_.domain, c_.potential, ActivityField(c_.activity), c_.validate.survivor_time, initial,
                    suite_seed};
    p.validate();
    return {validation::survivor_check(p, c_.validate.chains)};
  }
  if (name == "influence") {
    Point x = c_.validate.influence_x.value_or(Point::zeros(c_.domain.dimension()));
    if (!c_.validate.influence_x) {
      for (std::size_t a = 0; a < c_.domain.dimension(); ++a) x[a] = c_.domain.side(a) / 2.0;
    }
    auto p = glauber_params(c_, c_.resolved_horizon());
    p.initial = Configuration{};
    p.seed = suite_seed;
    const auto est =
        validation::influence_estimate(x, [](const Point&) { return 1.0; }, p, c_.validate.chains);
    std::optional<double> target;
    if (c_.potential.strength() == 0.0 || c_.activity == 0.0) {
      target = 1.0;
    } else if (const auto m = rod_model(c_)) {
      const double sigma = m->diameter;
      auto mean = [&](double len) {
        return len > 0.0 ? oracle::tonks_mean_count({len, sigma, c_.activity}) : 0.0;
      };
      target = 1.0 + mean(x[0] - sigma) + mean(m->length - x[0] - sigma) - mean(m->length);
    }
    IdentityReport r;
    if (target) {
      r = validation::z_report("influence[f=1]", est.value, *target, est.stderr);
    } else {
      r.test = "influence[f=1]";
      r.estimate = est.value;
      r.stderr = est.stderr;
      r.target = std::numeric_limits<double>::quiet_NaN();
      r.z = std::numeric_limits<double>::quiet_NaN();
      r.pass = true;
      r.status = "inconclusive";
    }
    r.details = {{"pinned_mean", est.pinned_mean}, {"base_mean", est.base_mean}};
    return {r};
  }
  if (name == "relaxation") {
    Rng rng(suite_seed);
    Configuration start;
    double drop = 0.0;
    if (const auto m = rod_model(c_)) {
      start = oracle::sample_tonks({m->length, m->diameter, c_.activity}, rng);
    } else {
      drop = 20.0;
    }
    const ActivityField act(c_.activity);
    GlauberChain chain(c_.domain, c_.potential, act, start, Rng(suite_seed, 1));
    chain.run_until(drop);
    EventTrace trace{chain.configuration(), c_.validate.relaxation_horizon, {}};
    GlauberChain timed(c_.domain, c_.potential, act, chain.configuration(), Rng(suite_seed, 2));
    timed.run_until(c_.validate.relaxation_horizon, &trace);
    const auto series = trace.cardinality_series(c_.validate.relaxation_dt);
    const auto est = validation::relaxation_time(series, c_.validate.relaxation_dt, c_.validate.relaxation_lags);

    IdentityReport r;
    r.test = "relaxation";
    r.estimate = est.tau;
    r.stderr = est.stderr;
    const double gap = 1.0 - c_.activity * c_.potential.temperedness(c_.domain.dimension());
    r.target = gap > 0.0 ? 1.0 / gap : std::numeric_limits<double>::quiet_NaN();
    r.details = {{"gap_bound", gap}};
    using S = validation::RelaxationEstimate::Status;
    if (est.status == S::kDegenerate) {
      r.status = "degenerate";
      r.pass = true;
      r.z = std::numeric_limits<double>::quiet_NaN();
    } else if (est.status == S::kNonDecaying) {
      r.status = "fail";
      r.pass = false;
      r.z = std::numeric_limits<double>::quiet_NaN();
    } else if (gap > 0.0) {
      // One-sided: tau must not exceed 1 / gap beyond the error band.
      r.z = est.stderr > 0.0 ? (est.tau - r.target) / est.stderr : (est.tau > r.target ? INFINITY : 0.0);
      r.pass = r.z <= validation::kZThreshold;
      r.status = r.pass ? "pass" : "fail";
    } else {
      r.z = std::numeric_limits<double>::quiet_NaN();
      r.pass = true;
      r.status = "inconclusive";
    }
    return {r};
  }
  if (name == "martingale") {
    const auto m = rods(name);
    if (!m) return {skipped(name)};
    for (const std::size_t k : c_.localize.k) {
      out.push_back(localization::martingale_check(c_.activity, c_.localize.tau, *m, k, c_.localize.runs,
                                                   derive_seed(suite_seed, k)));
    }
    out.push_back(localization::empty_pinning_check(c_.activity, c_.localize.tau, *m, c_.localize.runs,
                                                    derive_seed(suite_seed, 1000)));
    return out;
  }
  if (name == "variance") {
    const auto m = rods(name);
    if (!m) return {skipped(name)};
    const double lambda1 = c_.localize.lambda1.value_or(c_.activity / 2.0);
    for (const std::size_t k : c_.localize.variance_k) {
      auto v = localization::variance_conservation_check(c_.activity, lambda1, *m, k, c_.localize.runs,
                                                         derive_seed(suite_seed, k), c_.localize.delta);
      v.report.details.emplace_back("observed_ratio", v.observed_ratio);
      v.report.details.emplace_back("theoretical_constant", v.theoretical_constant);
      v.report.details.emplace_back("theoretical_factor", v.theoretical_factor);
      v.report.details.emplace_back("delta", v.delta);
      out.push_back(v.report);
    }
    return out;
  }
  throw CLI::ValidationError("--suite", "unknown suite '" + name + "'");
}

int emit_reports(const RunConfig& c, const std::vector<validation::IdentityReport>& reports, std::ostream& out) {
  Sink sink(c, out);
  bool ok = true;
  for (const auto& r : reports) {
    sink.record(report_json(r, c));
    // Inconclusive reports (empty bins, no oracle) do not fail the run.
    ok = ok && (r.pass || r.status == "inconclusive");
  }
  sink.flush();
  return ok ? kExitOk : kExitTestFailure;
}

int cmd_validate(const RunConfig& c, const Flags& f, std::ostream& out) {
  const std::string suite = f.suite.value_or("all");
  if (suite != "all" && std::find(kSuites.begin(), kSuites.end(), suite) == kSuites.end()) {
    throw CLI::ValidationError("--suite", "unknown suite '" + suite + "'");
  }
  Validator v(c, f.batch, suite == "all");
  std::vector<validation::IdentityReport> reports;
  for (const auto& name : kSuites) {
    if (suite != "all" && suite != name) continue;
    auto rs = v.run_suite(name);
    reports.insert(reports.end(), rs.begin(), rs.end());
  }
  return emit_reports(c, reports, out);
}

int cmd_localize(const RunConfig& c, std::ostream& out) {
  if (!rod_model(c)) throw UnsupportedError("localize needs a 1D hard-rod config");
  Validator v(c, std::nullopt, false);
  auto reports = v.run_suite("martingale");
  auto var = v.run_suite("variance");
  reports.insert(reports.end(), var.begin(), var.end());
  return emit_reports(c, reports, out);
}

// ---------------------------------------------------------------- bench

int cmd_bench(const RunConfig& c, std::ostream& out) {
  Sink sink(c, out);
  double lo = INFINITY, hi = 0.0;
  for (std::size_t i = 0; i < c.bench.lengths.size(); ++i) {
    const double len = c.bench.lengths[i];
    const Domain dom(std::vector<double>(c.domain.dimension(), len));
    const auto t = measure_throughput(dom, c.potential, c.activity, c.bench.events, c.bench.repeats, c.bench.burn_in,
                                      derive_seed(c.seed, i));
    lo = std::min(lo, t.events_per_sec);
    hi = std::max(hi, t.events_per_sec);
    ordered_json rec{{"record", "bench"},
                     {"length", len},
                     {"dimension", c.domain.dimension()},
                     {"activity", c.activity},
                     {"events", t.events},
                     {"seconds", t.seconds},
                     {"events_per_sec", t.events_per_sec},
                     {"mean_count", t.mean_count},
                     {"seed", derive_seed(c.seed, i)}};
    add_provenance(rec, c);
    sink.record(rec);
  }
  ordered_json summary{{"record", "bench_summary"}, {"max_over_min", hi / lo}, {"seed", c.seed}};
  add_provenance(summary, c);
  sink.record(summary);
  sink.flush();
  return kExitOk;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Continuum Glauber sampler for finite-range repulsive Gibbs point processes", "gibbsglauber"};
  app.set_version_flag("--version", kVersion);
  Flags f;
  app.add_option("--config", f.config, "JSON or TOML config file (by extension)");
  app.add_option("--seed", f.seed, "Master seed");
  app.add_option("--chains", f.chains, "Number of independent chains");
  app.add_option("--out", f.out, "Output file (default stdout)");
  app.add_option("--format", f.format, "jsonl or csv (sample only)");
  app.add_option("--T", f.horizon, "Continuous-time horizon");
  app.add_option("--epsilon", f.epsilon, "Target total variation distance");
  app.add_option("--gamma", f.gamma, "Spectral gap lower bound");

  auto* sample = app.add_subcommand("sample", "Run independent chains and write their final configurations");
  auto* canon = app.add_subcommand("canonical", "Draw a configuration with exactly k points");
  canon->add_flag("--certified", f.certified, "Run the full activity sweep");
  canon->add_option("--k", f.k, "Number of points");
  auto* validate = app.add_subcommand("validate", "Run statistical identity checks");
  validate->add_option("--suite", f.suite, "gnz, survivors, domination, ratio, influence, relaxation, tonks, "
                                           "martingale, variance or all");
  validate->add_option("--batch", f.batch, "Sample file produced by `sample` to analyse");
  auto* localize = app.add_subcommand("localize", "Run the 1D pinning-process checks");
  auto* bench = app.add_subcommand("bench", "Measure events per second across box sizes");
  for (auto* sub : {sample, canon, validate, localize, bench}) sub->fallthrough();
  app.require_subcommand(1);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    const RunConfig c = effective_config(f);
    if (sample->parsed()) return cmd_sample(c, out);
    if (canon->parsed()) return cmd_canonical(c, out);
    if (validate->parsed()) return cmd_validate(c, f, out);
    if (localize->parsed()) return cmd_localize(c, out);
    if (bench->parsed()) return cmd_bench(c, out);
  } catch (const CLI::ValidationError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const ParameterError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const InfeasibleError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const UnsupportedError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const InvalidPotentialError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "runtime error: " << e.what() << '\n';
    return kExitRuntime;
  }
  return kExitUsage;
}

}  // namespace gibbs::cli
