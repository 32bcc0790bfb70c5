#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "gibbs/configuration.hpp"
#include "gibbs/geometry.hpp"
#include "gibbs/potential.hpp"
#include "gibbs/random.hpp"

namespace gibbs::oracle {

/// One-dimensional hard rods (Tonks gas) on [0, length].
struct TonksModel {
  double length;
  /// Rod diameter sigma = 2r.
  double diameter;
  double activity;

  void validate() const;
};

/// log Z with Z = sum_k lambda^k max(0, L - (k-1) sigma)^k / k!.
double log_tonks_partition(const TonksModel& m);
double tonks_partition(const TonksModel& m);

/// Largest k with a non-zero term: floor(L / sigma) + 1.
std::size_t tonks_max_count(const TonksModel& m);

/// Pr(|eta| = k) under the Tonks Gibbs measure.
double tonks_card_pmf(const TonksModel& m, std::size_t k);
/// Whole pmf, indices 0..tonks_max_count(m).
std::vector<double> tonks_card_pmf_all(const TonksModel& m);
double tonks_mean_count(const TonksModel& m);

/// One-point density zeta(x) = lambda Z(x - sigma) Z(L - x - sigma) / Z(L),
/// where Z(l) is the partition function of a free segment of length l.
double one_point_density(const TonksModel& m, double x);

/// Exact draw from the Tonks Gibbs measure: a count from the pmf, then the
/// standard gap transform of sorted uniforms on [0, L - (k-1) sigma].
Configuration sample_tonks(const TonksModel& m, Rng& rng, std::uint64_t first_id = 0);

/// Piecewise-constant activity on disjoint closed intervals, with hard rods of
/// diameter sigma.
struct ActivityInterval {
  double lo;
  double hi;
  double activity;
};

class IntervalActivity {
 public:
  IntervalActivity(std::vector<ActivityInterval> intervals, double diameter);

  const std::vector<ActivityInterval>& intervals() const noexcept { return intervals_; }
  double diameter() const noexcept { return diameter_; }
  /// Integral of the activity.
  double total_activity() const noexcept;
  /// True iff every gap between consecutive intervals is at least sigma, so
  /// rods in different intervals never interact.
  bool separated() const noexcept;
  /// Sum over intervals of floor(len / sigma) + 1.
  std::size_t packing_bound() const noexcept;

 private:
  std::vector<ActivityInterval> intervals_;
  double diameter_;
};

/// Default truncation order with an exact support: packing_bound().
std::size_t default_kmax(const IntervalActivity& act);

/// Partition function of hard rods with activity `act`.
///
/// Uses the product of per-interval Tonks sums when the intervals are
/// separated, otherwise `restricted_partition_quadrature`.
double restricted_partition(const IntervalActivity& act, std::size_t kmax);

/// Ordered-coordinate quadrature: Z = sum_{k <= kmax} G_k, where
/// G_k(y) = integral_{x >= y} lambda(x) G_{k-1}(x + sigma) dx and G_0 = 1,
/// each level by adaptive Simpson at tolerance 1e-10 split at the kinks of
/// the integrand. Throws TruncationError when kmax is below the packing bound
/// and the Poisson tail sum_{k > kmax} lambda_tot^k / k! exceeds 1e-12 Z.
double restricted_partition_quadrature(const IntervalActivity& act, std::size_t kmax);

struct McEstimate {
  double value;
  double stderr;
};

/// Monte Carlo estimate of Z = sum_{k <= kmax} (lambda |Lambda|)^k / k! E[prod e^{-phi}]
/// over uniform k-tuples, n_mc tuples per order. Throws TruncationError when
/// kmax is below the hard-sphere packing bound (or the potential has no hard
/// core) and the Poisson tail exceeds tail_tolerance * Z.
McEstimate mc_partition(const Domain& domain, const PairPotential& phi, double activity, std::size_t kmax,
                        std::size_t n_mc, std::uint64_t seed, double tail_tolerance = 1e-12);

/// sum_{k > kmax} a^k / k!.
double poisson_tail_mass(double a, std::size_t kmax);

}  // namespace gibbs::oracle
