#include "gibbs/validation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include "gibbs/errors.hpp"
#include "gibbs/quadrature.hpp"
#include "gibbs/random.hpp"
#include "gibbs/stats.hpp"

namespace gibbs::validation {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double safe_z(double diff, double stderr) {
  if (stderr > 0.0) return diff / stderr;
  if (diff == 0.0) return 0.0;
  return diff > 0.0 ? kInf : -kInf;
}

}  // namespace

nlohmann::json to_json(const IdentityReport& r) {
  auto num = [](double v) -> nlohmann::json {
    if (std::isfinite(v)) return v;
    if (std::isnan(v)) return nullptr;
    return v > 0 ? "inf" : "-inf";
  };
  nlohmann::json j{{"test", r.test},        {"estimate", num(r.estimate)}, {"target", num(r.target)},
                   {"stderr", num(r.stderr)}, {"z", num(r.z)},               {"pass", r.pass},
                   {"status", r.status}};
  if (!r.details.empty()) {
    nlohmann::json d = nlohmann::json::object();
    for (const auto& [k, v] : r.details) d[k] = num(v);
    j["details"] = std::move(d);
  }
  return j;
}

IdentityReport z_report(std::string test, double estimate, double target, double stderr, double threshold) {
  IdentityReport r;
  r.test = std::move(test);
  r.estimate = estimate;
  r.target = target;
  r.stderr = stderr;
  r.z = safe_z(estimate - target, stderr);
  r.pass = std::abs(r.z) <= threshold;
  r.status = r.pass ? "pass" : "fail";
  return r;
}

std::vector<double> cardinality_histogram(const SampleBatch& batch) {
  std::vector<double> h;
  for (const auto& c : batch.configurations) {
    if (c.size() >= h.size()) h.resize(c.size() + 1, 0.0);
    h[c.size()] += 1.0;
  }
  return h;
}

IdentityReport gnz_residual(const SampleBatch& batch, const Functional& f, std::size_t n_x, std::uint64_t seed,
                            double threshold) {
  if (n_x == 0) throw ParameterError("n_x must be >= 1");
  if (batch.size() == 0) throw ParameterError("empty sample batch");
  const double lambda_total = batch.activity * batch.domain.volume();

  auto checked = [](double v) {
    if (!std::isfinite(v)) throw ParameterError("GNZ functional returned a non-finite value");
    return v;
  };

  stats::RunningMean diff, lhs_mean, rhs_mean;
  for (std::size_t i = 0; i < batch.size(); ++i) {
    const Configuration& eta = batch.configurations[i];
    double lhs = 0.0;
    for (const auto& p : eta.particles()) lhs += checked(f(eta, p.position));

    double rhs = 0.0;
    if (lambda_total > 0.0) {
      Rng rng(seed, i);
      Configuration extended = eta;
      const ParticleId new_id{eta.next_free_id()};
      for (std::size_t j = 0; j < n_x; ++j) {
        const Point x = uniform_point(batch.domain, rng);
        const double w = birth_acceptance(delta_energy_exhaustive(eta, x, batch.potential));
        if (w == 0.0) continue;
        extended.add({new_id, x});
        rhs += w * checked(f(extended, x));
        extended.remove_at(extended.size() - 1);
      }
      rhs *= lambda_total / static_cast<double>(n_x);
    }
    diff.add(lhs - rhs);
    lhs_mean.add(lhs);
    rhs_mean.add(rhs);
  }
  IdentityReport r = z_report("gnz", diff.mean(), 0.0, diff.stderr_of_mean(), threshold);
  r.details = {{"lhs", lhs_mean.mean()}, {"rhs", rhs_mean.mean()}, {"samples", static_cast<double>(batch.size())}};
  return r;
}

IdentityReport cardinality_ratio_check(const SampleBatch& batch, std::size_t k, double threshold) {
  if (k == 0) throw ParameterError("ratio check needs k >= 1");
  const double lambda_total = batch.activity * batch.domain.volume();
  const auto hist = cardinality_histogram(batch);
  const double n = static_cast<double>(batch.size());
  const double a = k - 1 < hist.size() ? hist[k - 1] : 0.0;
  const double b = k < hist.size() ? hist[k] : 0.0;

  IdentityReport r;
  r.test = "cardinality_ratio";
  r.target = lambda_total > 0.0 ? static_cast<double>(k) / lambda_total : kInf;
  if (a == 0.0 || b == 0.0) {
    r.status = "inconclusive";
    r.pass = false;
    r.estimate = std::numeric_limits<double>::quiet_NaN();
    r.stderr = std::numeric_limits<double>::quiet_NaN();
    r.z = std::numeric_limits<double>::quiet_NaN();
    r.details = {{"count_k_minus_1", a}, {"count_k", b}};
    return r;
  }
  const double pa = a / n;
  const double pb = b / n;
  const double ratio = pa / pb;
  // Delta method for a ratio of multinomial proportions.
  const double rel_var = (1.0 - pa) / (n * pa) + (1.0 - pb) / (n * pb) + 2.0 / n;
  r.estimate = ratio;
  r.stderr = ratio * std::sqrt(rel_var);
  r.z = safe_z(ratio - r.target, r.stderr);
  r.pass = r.z >= -threshold;
  r.status = r.pass ? "pass" : "fail";
  r.details = {{"k", static_cast<double>(k)}, {"p_k_minus_1", pa}, {"p_k", pb}};
  return r;
}

IdentityReport survivor_check(const GlauberParams& params, std::size_t n_chains, double level, double threshold) {
  if (params.initial.empty()) throw ParameterError("survivor check needs a non-empty initial configuration");
  const double s = params.horizon;
  const std::size_t m = params.initial.size();
  const double p = std::exp(-s);
  const auto runs = run_many(params, n_chains);

  std::vector<std::uint64_t> initial_ids;
  for (const auto& q : params.initial.particles()) initial_ids.push_back(to_underlying(q.id));

  std::vector<double> counts(m + 1, 0.0);
  std::vector<std::vector<std::uint8_t>> alive(n_chains, std::vector<std::uint8_t>(m, 0));
  stats::RunningMean survivors;
  for (std::size_t c = 0; c < n_chains; ++c) {
    std::size_t n_alive = 0;
    for (std::size_t i = 0; i < m; ++i) {
      if (runs[c].configuration.contains(ParticleId{initial_ids[i]})) {
        alive[c][i] = 1;
        ++n_alive;
      }
    }
    counts[n_alive] += 1.0;
    survivors.add(static_cast<double>(n_alive));
  }

  std::vector<double> expected(m + 1);
  for (std::size_t k = 0; k <= m; ++k) expected[k] = stats::binomial_pmf(m, p, k);
  const auto chi = stats::chi_squared_gof(counts, expected);

  // Pairwise correlation of survival indicators.
  std::vector<double> mean(m, 0.0);
  for (const auto& row : alive) {
    for (std::size_t i = 0; i < m; ++i) mean[i] += row[i];
  }
  for (auto& v : mean) v /= static_cast<double>(n_chains);
  double max_corr_z = 0.0;
  const double sqrt_n = std::sqrt(static_cast<double>(n_chains));
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = i + 1; j < m; ++j) {
      const double vi = mean[i] * (1.0 - mean[i]);
      const double vj = mean[j] * (1.0 - mean[j]);
      if (vi == 0.0 || vj == 0.0) continue;
      double both = 0.0;
      for (const auto& row : alive) both += row[i] * row[j];
      both /= static_cast<double>(n_chains);
      const double rho = (both - mean[i] * mean[j]) / std::sqrt(vi * vj);
      max_corr_z = std::max(max_corr_z, std::abs(rho) * sqrt_n);
    }
  }

  const double target = static_cast<double>(m) * p;
  IdentityReport r = z_report("survivors", survivors.mean(), target, survivors.stderr_of_mean(), threshold);
  const bool independent = max_corr_z <= threshold;
  r.pass = chi.p_value >= level && independent;
  r.status = r.pass ? "pass" : "fail";
  r.details = {{"chi2", chi.statistic},
               {"dof", static_cast<double>(chi.dof)},
               {"p_value", chi.p_value},
               {"max_corr_z", max_corr_z},
               {"survival_probability", p},
               {"initial_count", static_cast<double>(m)}};
  return r;
}

IdentityReport domination_check(const SampleBatch& batch, double threshold) {
  if (batch.size() == 0) throw ParameterError("empty sample batch");
  const double lambda_total = batch.activity * batch.domain.volume();
  const auto hist = cardinality_histogram(batch);
  const double n = static_cast<double>(batch.size());

  stats::RunningMean count;
  for (const auto& c : batch.configurations) count.add(static_cast<double>(c.size()));

  double cum = 0.0;
  double min_cdf_z = kInf;
  for (std::size_t k = 0; k < hist.size(); ++k) {
    cum += hist[k];
    const double emp = cum / n;
    const double pois = stats::poisson_cdf(lambda_total, k);
    const double sd = std::sqrt(pois * (1.0 - pois) / n);
    min_cdf_z = std::min(min_cdf_z, safe_z(emp - pois, sd));
  }

  IdentityReport r;
  r.test = "domination";
  r.estimate = count.mean();
  r.target = lambda_total;
  r.stderr = count.stderr_of_mean();
  r.z = safe_z(r.estimate - r.target, r.stderr);
  r.pass = r.z <= threshold && min_cdf_z >= -threshold;
  r.status = r.pass ? "pass" : "fail";
  r.details = {{"min_cdf_z", min_cdf_z}};
  return r;
}

InfluenceEstimate influence_estimate(const Point& x, const std::function<double(const Point&)>& f,
                                     const GlauberParams& params, std::size_t n_chains, std::size_t workers) {
  if (!params.domain.contains(x)) throw ParameterError("influence point outside the domain");
  auto eta_f = [&](const Configuration& eta) {
    double s = 0.0;
    for (const auto& p : eta.particles()) s += f(p.position);
    return s;
  };

  GlauberParams base = params;
  base.seed = derive_seed(params.seed, 0);
  GlauberParams pinned = params;
  pinned.seed = derive_seed(params.seed, 1);
  pinned.activity.with_pins(params.domain, params.potential,
                            Configuration({Particle{ParticleId{std::numeric_limits<std::uint64_t>::max()}, x}}));

  stats::RunningMean base_mean, pinned_mean;
  for (const auto& r : run_many(base, n_chains, workers)) base_mean.add(eta_f(r.configuration));
  const double fx = f(x);
  for (const auto& r : run_many(pinned, n_chains, workers)) pinned_mean.add(eta_f(r.configuration) + fx);

  const double se = std::hypot(base_mean.stderr_of_mean(), pinned_mean.stderr_of_mean());
  return {pinned_mean.mean() - base_mean.mean(), se, pinned_mean.mean(), base_mean.mean()};
}

std::string to_string(RelaxationEstimate::Status s) {
  switch (s) {
    case RelaxationEstimate::Status::kOk:
      return "ok";
    case RelaxationEstimate::Status::kDegenerate:
      return "degenerate";
    case RelaxationEstimate::Status::kNonDecaying:
      return "non_decaying";
  }
  return "unknown";
}

namespace {

constexpr double kAcfFloor = 0.1;

std::vector<double> autocorrelation(std::span<const double> x, std::size_t n_lags) {
  const std::size_t n = x.size();
  double mean = 0.0;
  for (double v : x) mean += v;
  mean /= static_cast<double>(n);
  double c0 = 0.0;
  for (double v : x) c0 += (v - mean) * (v - mean);
  c0 /= static_cast<double>(n);
  if (c0 <= 0.0) return {};
  std::vector<double> acf(n_lags + 1, 0.0);
  for (std::size_t l = 0; l <= n_lags && l < n; ++l) {
    double c = 0.0;
    for (std::size_t t = 0; t + l < n; ++t) c += (x[t] - mean) * (x[t + l] - mean);
    acf[l] = c / static_cast<double>(n - l) / c0;
  }
  return acf;
}

// tau from an ACF; status via out-param.
double fit_tau(const std::vector<double>& acf, double dt, RelaxationEstimate::Status& status) {
  status = RelaxationEstimate::Status::kOk;
  if (acf.empty()) {
    status = RelaxationEstimate::Status::kDegenerate;
    return std::numeric_limits<double>::quiet_NaN();
  }
  std::size_t end = 1;
  while (end < acf.size() && acf[end] >= kAcfFloor) ++end;
  if (end == acf.size()) {
    status = RelaxationEstimate::Status::kNonDecaying;
    return kInf;
  }
  if (end == 1) {
    // Decorrelated within one grid step; use the single lag if it is positive.
    if (acf[1] > 0.0) return -dt / std::log(acf[1]);
    return dt / std::log(1.0 / kAcfFloor);
  }
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t l = 1; l < end; ++l) {
    const double t = static_cast<double>(l) * dt;
    sxy += t * std::log(acf[l]);
    sxx += t * t;
  }
  return -sxx / sxy;
}

}  // namespace

RelaxationEstimate relaxation_time(std::span<const double> series, double dt, std::size_t n_lags,
                                   std::size_t n_batches) {
  if (!(dt > 0.0)) throw ParameterError("dt must be positive");
  if (n_lags == 0) throw ParameterError("n_lags must be >= 1");
  if (series.size() < 2 * (n_lags + 1)) throw ParameterError("series too short for the requested lags");
  RelaxationEstimate out;
  out.acf = autocorrelation(series, n_lags);
  out.tau = fit_tau(out.acf, dt, out.status);
  if (out.status != RelaxationEstimate::Status::kOk) return out;

  if (n_batches >= 2) {
    const std::size_t len = series.size() / n_batches;
    stats::RunningMean batch_tau;
    for (std::size_t b = 0; b < n_batches && len > 2 * (n_lags + 1); ++b) {
      RelaxationEstimate::Status st;
      const double t = fit_tau(autocorrelation(series.subspan(b * len, len), n_lags), dt, st);
      if (st == RelaxationEstimate::Status::kOk) batch_tau.add(t);
    }
    out.stderr = batch_tau.count() >= 2 ? batch_tau.stderr_of_mean() : kInf;
  }
  return out;
}

std::vector<IdentityReport> tonks_oracle_checks(const oracle::TonksModel& model) {
  std::vector<IdentityReport> out;

  const auto pmf = oracle::tonks_card_pmf_all(model);
  const double total = stats::stable_sum(pmf);
  IdentityReport norm = z_report("tonks_pmf_normalisation", total, 1.0, 0.0);
  norm.pass = std::abs(total - 1.0) <= 1e-12;
  norm.status = norm.pass ? "pass" : "fail";
  out.push_back(norm);

  const double mean = oracle::tonks_mean_count(model);
  // Split at the kinks of zeta (x = sigma, L - sigma, ...) so Simpson sees smooth pieces.
  std::vector<double> cuts{0.0, model.length};
  for (double c = model.diameter; c < model.length; c += model.diameter) {
    cuts.push_back(c);
    cuts.push_back(model.length - c);
  }
  std::sort(cuts.begin(), cuts.end());
  double integral = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    integral += oracle::adaptive_simpson([&](double x) { return oracle::one_point_density(model, x); }, cuts[i],
                                         cuts[i + 1], 1e-12);
  }
  IdentityReport intensity = z_report("tonks_intensity_integral", integral, mean, 0.0);
  intensity.pass = std::abs(integral - mean) <= 1e-8;
  intensity.status = intensity.pass ? "pass" : "fail";
  out.push_back(intensity);

  const oracle::IntervalActivity whole({{0.0, model.length, model.activity}}, model.diameter);
  // Nested quadrature cost grows geometrically with the order; only cross-check small models.
  if (oracle::default_kmax(whole) > 5) return out;
  const double z_closed = oracle::tonks_partition(model);
  const double z_quad = oracle::restricted_partition_quadrature(whole, oracle::default_kmax(whole));
  IdentityReport part = z_report("tonks_partition_quadrature", z_quad, z_closed, 0.0);
  part.pass = std::abs(z_quad - z_closed) <= 1e-8 * z_closed;
  part.status = part.pass ? "pass" : "fail";
  out.push_back(part);
  return out;
}

}  // namespace gibbs::validation
