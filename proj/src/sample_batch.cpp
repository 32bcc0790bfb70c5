#include "gibbs/sample_batch.hpp"

#include <fstream>
#include <istream>

#include "json.hpp"

#include "gibbs/errors.hpp"

namespace gibbs {

void SampleBatch::validate() const {
  for (const auto& c : configurations) validate_configuration(c, domain, potential);
}

SampleBatch generate_batch(const GlauberParams& params, std::size_t n_chains, std::size_t workers) {
  if (!params.activity.is_constant()) throw ParameterError("sample batches need a constant activity");
  auto runs = run_many(params, n_chains, workers);
  SampleBatch batch{params.domain, params.potential, params.activity.peak(), params.horizon, params.seed, {}, {}};
  batch.configurations.reserve(runs.size());
  batch.stats.reserve(runs.size());
  for (auto& r : runs) {
    batch.configurations.push_back(std::move(r.configuration));
    batch.stats.push_back(r.stats);
  }
  return batch;
}

namespace {

PairPotential potential_from_json(const nlohmann::json& j) {
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "hard_sphere") return PairPotential::hard_sphere(j.at("radius").get<double>());
  if (kind == "soft_core") return PairPotential::soft_core(j.at("strength").get<double>(), j.at("range").get<double>());
  throw ParameterError("unknown potential kind '" + kind + "'");
}

}  // namespace

SampleBatch read_sample_batch(std::istream& in) {
  std::optional<SampleBatch> batch;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    nlohmann::json rec;
    try {
      rec = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
      throw ParameterError("sample file line " + std::to_string(line_no) + ": " + e.what());
    }
    const std::string type = rec.value("record", "");
    if (type == "header") {
      batch.emplace(SampleBatch{Domain(rec.at("box").get<std::vector<double>>()),
                                potential_from_json(rec.at("potential")), rec.at("activity").get<double>(),
                                rec.at("T").get<double>(), rec.at("seed").get<std::uint64_t>(), {}, {}});
    } else if (type == "chain") {
      if (!batch) throw ParameterError("sample file: chain record before header");
      std::vector<Point> pts;
      for (const auto& p : rec.at("points")) pts.emplace_back(Point(p.get<std::vector<double>>()));
      batch->configurations.push_back(Configuration::from_points(pts));
      RunStats s;
      s.n_events = rec.value("n_events", std::uint64_t{0});
      s.n_attempted_births = rec.value("n_attempted_births", std::uint64_t{0});
      batch->stats.push_back(s);
    }
  }
  if (!batch) throw ParameterError("sample file has no header record");
  batch->validate();
  return std::move(*batch);
}

SampleBatch read_sample_batch_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParameterError("cannot open sample file '" + path + "'");
  return read_sample_batch(in);
}

}  // namespace gibbs
