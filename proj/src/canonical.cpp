#include "gibbs/canonical.hpp"

#include <cmath>
#include <sstream>

#include "gibbs/errors.hpp"
#include "gibbs/glauber.hpp"
#include "gibbs/planning.hpp"
#include "gibbs/random.hpp"
#include "gibbs/stats.hpp"

namespace gibbs::canonical {

namespace {

// Substream offsets keep pilot, search and sampling draws disjoint.
constexpr std::uint64_t kPilotStream = 0x5049'4c4fULL;
constexpr std::uint64_t kSearchStream = 0x5345'4152ULL;

std::size_t count_after_run(const Domain& domain, const PairPotential& phi, double activity, double horizon,
                            Rng rng) {
  ActivityField field(activity);
  GlauberChain chain(domain, phi, field, Configuration{}, rng);
  chain.run_until(horizon);
  return chain.configuration().size();
}

}  // namespace

void CanonicalParams::validate() const {
  if (!(delta > 0.0 && delta < 1.0)) throw ParameterError("delta must lie in (0, 1)");
  if (!(gamma > 0.0 && gamma <= 1.0)) throw ParameterError("gamma must lie in (0, 1]");
  if (!(activity >= 0.0) || !std::isfinite(activity)) throw ParameterError("activity must be >= 0");
}

std::uint64_t sweep_count(double lambda_total, double gamma, double delta) {
  if (!(lambda_total > 0.0) || !std::isfinite(lambda_total)) throw ParameterError("lambda|Lambda| must be > 0");
  if (!(gamma > 0.0 && gamma <= 1.0)) throw ParameterError("gamma must lie in (0, 1]");
  if (!(delta > 0.0 && delta < 1.0)) throw ParameterError("delta must lie in (0, 1)");
  const double raw = 512.0 / gamma * std::pow(lambda_total, 4) * std::log(16.0 * lambda_total) * std::log(1.0 / delta);
  const double m = std::ceil(std::max(raw, 0.0)) + 1.0;
  if (m > 1e18) throw ParameterError("sweep count overflows");
  return static_cast<std::uint64_t>(m);
}

void check_feasible(std::size_t k, const Domain& domain, const PairPotential& phi) {
  const auto bound = packing_bound(domain, phi);
  if (bound && k > *bound) {
    std::ostringstream os;
    os << "cannot place " << k << " spheres of radius " << phi.radius() << " in the domain (packing bound "
       << *bound << ")";
    throw InfeasibleError(os.str());
  }
}

MeanCountEstimate estimate_mean_count(double activity, const Domain& domain, const PairPotential& phi,
                                      std::size_t n_pilot, double horizon, std::uint64_t seed) {
  if (n_pilot == 0) throw ParameterError("n_pilot must be >= 1");
  const double lower = activity * domain.volume() / (1.0 + activity * phi.temperedness(domain.dimension()));
  if (activity == 0.0) return {0.0, 0.0, 0.0};
  GlauberParams params{domain, phi, ActivityField(activity), horizon, Configuration{}, seed};
  const auto runs = run_many(params, n_pilot);
  stats::RunningMean m;
  for (const auto& r : runs) m.add(static_cast<double>(r.configuration.size()));
  return {m.mean(), m.stderr_of_mean(), lower};
}

CanonicalResult canonical_sample(const CanonicalParams& params) {
  params.validate();
  check_feasible(params.k, params.domain, params.potential);

  CanonicalResult result;
  if (params.k == 0) {
    // j = 0 draws from the zero-activity measure, which is the empty set.
    result.configuration = Configuration{};
    result.draws = 1;
    return result;
  }
  const double lambda_total = params.activity * params.domain.volume();
  const std::uint64_t m = sweep_count(lambda_total, params.gamma, params.delta);
  const double step_tolerance = params.delta / (2.0 * static_cast<double>(m));

  if (params.n_pilot > 0) {
    const double horizon = plan_time(step_tolerance, 0, params.gamma, lambda_total);
    const auto pilot = estimate_mean_count(params.activity, params.domain, params.potential, params.n_pilot, horizon,
                                           derive_seed(params.seed, kPilotStream));
    if (static_cast<double>(params.k) > pilot.mean + 3.0 * pilot.stderr) {
      std::ostringstream os;
      os << "k = " << params.k << " exceeds the estimated mean count " << pilot.mean << " +/- " << pilot.stderr
         << "; the success guarantee does not apply";
      result.warnings.push_back(os.str());
    }
  }

  for (std::uint64_t j = 0; j <= m; ++j) {
    const double activity = static_cast<double>(j) * params.activity / static_cast<double>(m);
    const double horizon = plan_time(step_tolerance, 0, params.gamma, activity * params.domain.volume());
    ActivityField field(activity);
    GlauberChain chain(params.domain, params.potential, field, Configuration{}, Rng(params.seed, j));
    chain.run_until(horizon);
    ++result.draws;
    if (chain.configuration().size() == params.k) {
      result.configuration = chain.configuration();
      result.index = j;
      result.activity = activity;
      return result;
    }
  }
  return result;
}

double heuristic_activity(const CanonicalParams& params, const HeuristicOptions& opts) {
  params.validate();
  check_feasible(params.k, params.domain, params.potential);
  if (params.k == 0) return 0.0;
  const double volume = params.domain.volume();
  const std::size_t n_pilot = std::max<std::size_t>(params.n_pilot, 16);
  const std::uint64_t search_seed = derive_seed(params.seed, kSearchStream);

  auto pilot_mean = [&](double a) {
    const double horizon = opts.horizon ? *opts.horizon : plan_time(params.delta, 0, params.gamma, a * volume);
    double sum = 0.0;
    for (std::size_t i = 0; i < n_pilot; ++i) {
      sum += static_cast<double>(count_after_run(params.domain, params.potential, a, horizon, Rng(search_seed, i)));
    }
    return sum / static_cast<double>(n_pilot);
  };

  const double target = static_cast<double>(params.k);
  double lo = target / volume / 64.0;
  double hi = std::max(params.activity, target / volume);
  for (int i = 0; i < 24 && pilot_mean(hi) < target; ++i) {
    lo = hi;
    hi *= 2.0;
  }
  for (std::size_t i = 0; i < opts.search_steps; ++i) {
    const double mid = std::sqrt(lo * hi);
    (pilot_mean(mid) < target ? lo : hi) = mid;
  }
  return std::sqrt(lo * hi);
}

CanonicalResult sample_at_activity(const CanonicalParams& params, double activity, const HeuristicOptions& opts) {
  params.validate();
  check_feasible(params.k, params.domain, params.potential);
  CanonicalResult result;
  result.activity = activity;
  if (params.k == 0 && activity == 0.0) {
    result.configuration = Configuration{};
    result.draws = 1;
    return result;
  }
  const double horizon =
      opts.horizon ? *opts.horizon : plan_time(params.delta, 0, params.gamma, activity * params.domain.volume());
  ActivityField field(activity);
  for (std::uint64_t attempt = 0; attempt < opts.max_attempts; ++attempt) {
    GlauberChain chain(params.domain, params.potential, field, Configuration{}, Rng(params.seed, attempt));
    chain.run_until(horizon);
    ++result.draws;
    if (chain.configuration().size() == params.k) {
      result.configuration = chain.configuration();
      result.index = attempt;
      return result;
    }
  }
  return result;
}

CanonicalResult canonical_sample_heuristic(const CanonicalParams& params, const HeuristicOptions& opts) {
  const double a = heuristic_activity(params, opts);
  CanonicalResult r = sample_at_activity(params, a, opts);
  r.warnings.insert(r.warnings.begin(), "heuristic mode: output is not covered by the TV guarantee");
  return r;
}

}  // namespace gibbs::canonical
