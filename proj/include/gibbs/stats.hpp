#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

namespace gibbs::stats {

/// Neumaier-compensated running sum.
class CompensatedSum {
 public:
  void add(double x) noexcept {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  double value() const noexcept { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

/// Sum of `terms` in descending order of magnitude with compensation.
double stable_sum(std::vector<double> terms);

/// log(sum exp(x_i)); -inf for an empty input.
double log_sum_exp(std::span<const double> xs);

/// Welford mean / variance accumulator.
class RunningMean {
 public:
  void add(double x) noexcept {
    ++n_;
    const double d = x - mean_;
    mean_ += d / static_cast<double>(n_);
    m2_ += d * (x - mean_);
  }
  std::size_t count() const noexcept { return n_; }
  double mean() const noexcept { return mean_; }
  double variance() const noexcept { return n_ > 1 ? m2_ / static_cast<double>(n_ - 1) : 0.0; }
  double stderr_of_mean() const noexcept { return n_ > 0 ? std::sqrt(variance() / static_cast<double>(n_)) : 0.0; }

 private:
  std::size_t n_ = 0;
  double mean_ = 0.0;
  double m2_ = 0.0;
};

struct ChiSquaredResult {
  double statistic = 0.0;
  std::size_t dof = 0;
  double p_value = 1.0;
  std::size_t bins = 0;
};

/// Pearson goodness of fit of `observed` counts against probabilities
/// `expected_prob` (same length; remaining mass is added to the last bin).
/// Adjacent bins are merged from both tails until every expected count is at
/// least `min_expected`. With a single merged bin the test is degenerate and
/// reports p = 1 iff observed equals expected exactly.
ChiSquaredResult chi_squared_gof(std::span<const double> observed, std::span<const double> expected_prob,
                                 double min_expected = 5.0);

double poisson_pmf(double mean, std::size_t k);
double poisson_cdf(double mean, std::size_t k);
double binomial_pmf(std::size_t n, double p, std::size_t k);

struct KsResult {
  double statistic = 0.0;
  double p_value = 1.0;
};

/// Two-sample Kolmogorov-Smirnov test with the asymptotic Kolmogorov p-value
/// (Stephens' small-sample correction on the effective size).
KsResult ks_two_sample(std::vector<double> a, std::vector<double> b);

/// Complementary Kolmogorov distribution Q(x) = 2 sum_{j>=1} (-1)^{j-1} e^{-2 j^2 x^2}.
double kolmogorov_q(double x);

/// Two-sided normal tail probability of |Z| >= z.
double normal_two_sided_p(double z);

}  // namespace gibbs::stats
