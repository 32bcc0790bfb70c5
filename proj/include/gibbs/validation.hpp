#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "gibbs/configuration.hpp"
#include "gibbs/glauber.hpp"
#include "gibbs/oracle.hpp"
#include "gibbs/sample_batch.hpp"

namespace gibbs::validation {

/// |z| threshold of every identity test.
inline constexpr double kZThreshold = 4.0;
/// Significance level of every chi-squared / KS test.
inline constexpr double kTestLevel = 1e-3;

struct IdentityReport {
  std::string test;
  double estimate = 0.0;
  double target = 0.0;
  double stderr = 0.0;
  double z = 0.0;
  bool pass = false;
  /// "pass", "fail", "inconclusive" or "degenerate".
  std::string status;
  std::vector<std::pair<std::string, double>> details;
};

nlohmann::json to_json(const IdentityReport& r);

/// Two-sided z-test: pass iff |estimate - target| <= threshold * stderr.
/// A zero stderr passes only on exact agreement.
IdentityReport z_report(std::string test, double estimate, double target, double stderr,
                        double threshold = kZThreshold);

/// Histogram of |eta| over the batch.
std::vector<double> cardinality_histogram(const SampleBatch& batch);

/// Test functional F(eta, x) for the GNZ identity; must return finite values.
using Functional = std::function<double(const Configuration&, const Point&)>;

/// GNZ identity residual
///   E[sum_{x in eta} F(eta, x)] - E[ integral e^{-dH_x(eta)} F(eta + x, x) lambda dx ]
/// with the integral estimated from n_x uniform draws per configuration.
/// Per-configuration differences give the standard error; target 0.
IdentityReport gnz_residual(const SampleBatch& batch, const Functional& f, std::size_t n_x, std::uint64_t seed,
                            double threshold = kZThreshold);

/// One-sided check P(k-1)/P(k) >= k / (lambda |Lambda|) with a delta-method
/// standard error. Empty bins give status "inconclusive".
IdentityReport cardinality_ratio_check(const SampleBatch& batch, std::size_t k, double threshold = kZThreshold);

/// Runs `n_chains` chains of `params` to time `params.horizon` = s and tests the
/// number of surviving initial particles against Binomial(|S|, e^{-s}) by
/// chi-squared at `level`, and pairwise independence of survival indicators
/// (max |rho| sqrt(n) <= threshold).
IdentityReport survivor_check(const GlauberParams& params, std::size_t n_chains, double level = kTestLevel,
                              double threshold = kZThreshold);

/// Poisson domination: E|eta| <= lambda |Lambda| (one-sided z) and the empirical
/// CDF of |eta| above the Pois(lambda |Lambda|) CDF within `threshold` sigma.
IdentityReport domination_check(const SampleBatch& batch, double threshold = kZThreshold);

struct InfluenceEstimate {
  double value;
  double stderr;
  double pinned_mean;
  double base_mean;
};

/// Psi f(x) = E_{pinned at x}[eta(f)] - E[eta(f)]. The pinned arm runs with
/// activity lambda e^{-phi(x, .)} and adds x to every output. Arms use
/// independent master seeds derived from params.seed.
InfluenceEstimate influence_estimate(const Point& x, const std::function<double(const Point&)>& f,
                                     const GlauberParams& params, std::size_t n_chains, std::size_t workers = 0);

struct RelaxationEstimate {
  enum class Status { kOk, kDegenerate, kNonDecaying };
  Status status = Status::kOk;
  double tau = 0.0;
  double stderr = 0.0;
  /// Autocorrelation at lags 0..n_lags of the full series.
  std::vector<double> acf;
};

std::string to_string(RelaxationEstimate::Status s);

/// Exponential autocorrelation time of an observable sampled every `dt`:
/// least-squares slope of log rho(l dt) through the origin over the lags
/// before rho first drops below 0.1. The standard error comes from the
/// spread of per-batch estimates over `n_batches` contiguous batches.
RelaxationEstimate relaxation_time(std::span<const double> series, double dt, std::size_t n_lags,
                                   std::size_t n_batches = 10);

/// Internal consistency of the Tonks oracle: pmf normalisation, intensity
/// integral vs mean count, and factorised vs quadrature partition functions.
std::vector<IdentityReport> tonks_oracle_checks(const oracle::TonksModel& model);

}  // namespace gibbs::validation
