#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "gibbs/geometry.hpp"
#include "gibbs/potential.hpp"
#include "gibbs/random.hpp"
#include "gibbs/validation.hpp"

namespace gibbs::localization {

/// Hard rods of diameter sigma on [0, length]. The localization process is only
/// evaluated exactly in this setting.
struct HardRodModel {
  double length;
  double diameter;

  /// Throws UnsupportedError unless the domain is 1D and phi is a hard core.
  static HardRodModel from(const Domain& domain, const PairPotential& phi);
  /// C_phi = 2 sigma.
  double temperedness() const noexcept { return 2.0 * diameter; }
};

struct Segment {
  double lo;
  double hi;
  double length() const noexcept { return hi - lo; }
};

/// Hard-rod measure tilted by e^{-t|eta|} and pinned at A.
///
/// Free rods see activity base e^{-t} on [0, L] minus the open zones
/// (a - sigma, a + sigma) around each pin. The support splits into segments
/// whose mutual gaps are at least 2 sigma, so the free rods in different
/// segments are independent Tonks gases.
class PinnedTiltedMeasure {
 public:
  PinnedTiltedMeasure(HardRodModel model, double base_activity, double tilt, std::vector<double> pins = {});

  const HardRodModel& model() const noexcept { return model_; }
  double base_activity() const noexcept { return base_; }
  double tilt() const noexcept { return tilt_; }
  /// base e^{-tilt}.
  double activity() const noexcept { return activity_; }
  /// Sorted pin positions.
  const std::vector<double>& pins() const noexcept { return pins_; }
  const std::vector<Segment>& free_segments() const noexcept { return segments_; }

  /// Intensity of the free (unpinned) rods at x; zero inside excluded zones.
  double tilde_intensity(double x) const;
  /// Pr(number of free rods = j), the convolution of per-segment Tonks laws.
  std::vector<double> free_count_pmf() const;
  /// nu({|eta| = k}) with |eta| = |A| + free count.
  double count_probability(std::size_t k) const;

 private:
  HardRodModel model_;
  double base_;
  double tilt_;
  double activity_;
  std::vector<double> pins_;
  std::vector<Segment> segments_;
};

/// tilde_intensity at a 1D point; UnsupportedError for other dimensions.
double tilde_intensity(const PinnedTiltedMeasure& m, const Point& x);

struct PinningRealization {
  /// A(horizon), sorted.
  std::vector<double> pins;
  /// Acceptance time of each pin, in acceptance order.
  std::vector<double> acceptance_times;
  std::size_t proposals = 0;
};

/// Pinning process A(t) on [0, horizon]: Poisson(base) proposals (x, t, l) on
/// [0, L] x (0, horizon] x [0, 1] in time order; x joins A when
/// l < tilde_intensity_t(x) / base with the tilt t of the proposal.
/// Throws ConsistencyError if a pin lands inside an excluded zone.
PinningRealization simulate_pinning(double base_activity, double horizon, const HardRodModel& model, Rng& rng);

/// Monte Carlo mean of nu_tau({|eta| = k}) over pinning runs against the
/// untilted value nu_0({|eta| = k}).
validation::IdentityReport martingale_check(double base_activity, double horizon, const HardRodModel& model,
                                            std::size_t k, std::size_t n_runs, std::uint64_t seed,
                                            double threshold = validation::kZThreshold);

/// Pr(A(tau) = empty) against Z(base e^{-tau}) / Z(base).
validation::IdentityReport empty_pinning_check(double base_activity, double horizon, const HardRodModel& model,
                                               std::size_t n_runs, std::uint64_t seed,
                                               double threshold = validation::kZThreshold);

struct VarianceConservationResult {
  validation::IdentityReport report;
  /// E[Var_{nu_tau} phi] / Var_{nu_0} phi.
  double observed_ratio;
  /// C = 1 + e 2^{d+1} d! / delta^d.
  double theoretical_constant;
  /// (lambda_1 / lambda_0)^C.
  double theoretical_factor;
  double delta;
};

/// Largest delta with base_activity <= e^{-delta} e / C_phi, i.e. ln(e / (base C_phi)).
double default_delta(double base_activity, const HardRodModel& model);

/// Checks E[Var_{nu_tau} 1{|eta|=k}] >= (lambda_1/lambda_0)^C Var_{nu_0} 1{|eta|=k}
/// with tau = ln(lambda_0 / lambda_1). `delta` defaults to default_delta.
/// Throws ParameterError when lambda_1 > lambda_0.
VarianceConservationResult variance_conservation_check(double lambda0, double lambda1, const HardRodModel& model,
                                                       std::size_t k, std::size_t n_runs, std::uint64_t seed,
                                                       std::optional<double> delta = std::nullopt,
                                                       double threshold = validation::kZThreshold);

}  // namespace gibbs::localization
