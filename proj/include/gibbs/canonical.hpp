#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "gibbs/configuration.hpp"
#include "gibbs/geometry.hpp"
#include "gibbs/potential.hpp"

namespace gibbs::canonical {

/// Inputs of the fixed-size sampler.
struct CanonicalParams {
  std::size_t k = 0;
  /// Base activity lambda; the sweep visits j lambda / m for j = 0..m.
  double activity = 0.0;
  Domain domain;
  PairPotential potential;
  /// Total variation tolerance delta in (0, 1).
  double delta = 0.1;
  /// Spectral gap lower bound gamma in (0, 1], valid for every activity in [0, lambda].
  double gamma = 1.0;
  std::uint64_t seed = 0;
  /// Chains used to check k <= E|eta| before sweeping; 0 skips the check.
  std::size_t n_pilot = 256;

  void validate() const;
};

/// Outcome of a canonical draw. `configuration` is empty (nullopt) when every
/// attempt missed k, which is distinct from a successful draw of the empty set.
struct CanonicalResult {
  std::optional<Configuration> configuration;
  /// Sweep index j (certified) or attempt number (heuristic) of the accepted draw.
  std::uint64_t index = 0;
  /// Activity of the chain that produced the accepted draw.
  double activity = 0.0;
  /// Number of Glauber runs performed.
  std::uint64_t draws = 0;
  std::vector<std::string> warnings;

  bool success() const noexcept { return configuration.has_value(); }
};

/// m = ceil(512 (1/gamma) lambda_total^4 ln(16 lambda_total) ln(1/delta)) + 1.
/// Throws ParameterError for lambda_total <= 0 or out-of-range gamma / delta.
std::uint64_t sweep_count(double lambda_total, double gamma, double delta);

/// Throws InfeasibleError when k hard spheres cannot fit in the domain.
void check_feasible(std::size_t k, const Domain& domain, const PairPotential& phi);

struct MeanCountEstimate {
  double mean;
  double stderr;
  /// lambda |Lambda| / (1 + lambda C_phi), a lower bound on E|eta|.
  double lower_bound;
};

/// Mean of |eta| over `n_pilot` independent Glauber runs from the empty set
/// with the given horizon.
MeanCountEstimate estimate_mean_count(double activity, const Domain& domain, const PairPotential& phi,
                                      std::size_t n_pilot, double horizon, std::uint64_t seed);

/// Activity sweep: for j = 0..m runs continuum Glauber from the empty set at
/// activity j lambda / m for T_j = plan_time(delta / 2m, 0, gamma, j lambda |Lambda| / m)
/// and returns the first draw with exactly k points.
CanonicalResult canonical_sample(const CanonicalParams& params);

/// Non-certified sampler settings.
struct HeuristicOptions {
  /// Horizon of each Glauber run; nullopt uses plan_time(delta, 0, gamma, a |Lambda|).
  std::optional<double> horizon;
  std::size_t max_attempts = 100000;
  /// Bisection steps on log-activity.
  std::size_t search_steps = 24;
};

/// Activity a at which the pilot mean count reaches k, found by bisection on
/// log a with common random numbers across pilot evaluations.
double heuristic_activity(const CanonicalParams& params, const HeuristicOptions& opts = {});

/// Repeats Glauber runs at fixed `activity` until one has exactly k points.
/// Runs use substreams (seed, 0), (seed, 1), ...
CanonicalResult sample_at_activity(const CanonicalParams& params, double activity, const HeuristicOptions& opts = {});

/// Heuristic mode: `heuristic_activity` followed by `sample_at_activity`.
/// The conditional law given |eta| = k does not depend on the activity, so
/// the output law is right whenever each run has mixed; the TV guarantee of
/// the certified sweep does not apply.
CanonicalResult canonical_sample_heuristic(const CanonicalParams& params, const HeuristicOptions& opts = {});

}  // namespace gibbs::canonical
