#include "gibbs/stats.hpp"

#include <algorithm>
#include <limits>

#include <boost/math/distributions/binomial.hpp>
#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/distributions/poisson.hpp>

#include "gibbs/errors.hpp"

namespace gibbs::stats {

double stable_sum(std::vector<double> terms) {
  std::sort(terms.begin(), terms.end(), [](double a, double b) { return std::abs(a) > std::abs(b); });
  CompensatedSum s;
  for (double t : terms) s.add(t);
  return s.value();
}

double log_sum_exp(std::span<const double> xs) {
  double hi = -std::numeric_limits<double>::infinity();
  for (double x : xs) hi = std::max(hi, x);
  if (!std::isfinite(hi)) return hi;
  std::vector<double> scaled;
  scaled.reserve(xs.size());
  for (double x : xs) scaled.push_back(std::exp(x - hi));
  return hi + std::log(stable_sum(std::move(scaled)));
}

ChiSquaredResult chi_squared_gof(std::span<const double> observed, std::span<const double> expected_prob,
                                 double min_expected) {
  if (observed.size() != expected_prob.size() || observed.empty()) {
    throw ParameterError("chi-squared: observed and expected must be non-empty and equal length");
  }
  double n = 0.0;
  for (double o : observed) n += o;
  if (n <= 0.0) throw ParameterError("chi-squared: no observations");

  std::vector<double> obs(observed.begin(), observed.end());
  std::vector<double> exp(expected_prob.begin(), expected_prob.end());
  double mass = 0.0;
  for (double p : exp) mass += p;
  exp.back() += std::max(0.0, 1.0 - mass);
  for (double& e : exp) e *= n;

  // Merge low-expectation tail bins inward from both ends, then any interior stragglers.
  auto merge_into = [&](std::size_t from, std::size_t to) {
    obs[to] += obs[from];
    exp[to] += exp[from];
    obs.erase(obs.begin() + static_cast<std::ptrdiff_t>(from));
    exp.erase(exp.begin() + static_cast<std::ptrdiff_t>(from));
  };
  while (exp.size() > 1 && exp.front() < min_expected) merge_into(0, 1);
  while (exp.size() > 1 && exp.back() < min_expected) merge_into(exp.size() - 1, exp.size() - 2);
  for (std::size_t i = 0; i < exp.size() && exp.size() > 1;) {
    if (exp[i] < min_expected) {
      merge_into(i, i + 1 < exp.size() ? i + 1 : i - 1);
      i = 0;
    } else {
      ++i;
    }
  }

  ChiSquaredResult r;
  r.bins = exp.size();
  if (exp.size() == 1) {
    r.statistic = 0.0;
    r.dof = 0;
    r.p_value = std::abs(obs[0] - exp[0]) <= 1e-9 * n ? 1.0 : 0.0;
    return r;
  }
  for (std::size_t i = 0; i < exp.size(); ++i) {
    if (exp[i] <= 0.0) {
      if (obs[i] > 0.0) r.statistic = std::numeric_limits<double>::infinity();
      continue;
    }
    const double d = obs[i] - exp[i];
    r.statistic += d * d / exp[i];
  }
  r.dof = exp.size() - 1;
  if (!std::isfinite(r.statistic)) {
    r.p_value = 0.0;
  } else {
    r.p_value = boost::math::cdf(boost::math::complement(boost::math::chi_squared(static_cast<double>(r.dof)),
                                                          r.statistic));
  }
  return r;
}

double poisson_pmf(double mean, std::size_t k) {
  if (mean == 0.0) return k == 0 ? 1.0 : 0.0;
  return boost::math::pdf(boost::math::poisson(mean), static_cast<double>(k));
}

double poisson_cdf(double mean, std::size_t k) {
  if (mean == 0.0) return 1.0;
  return boost::math::cdf(boost::math::poisson(mean), static_cast<double>(k));
}

double binomial_pmf(std::size_t n, double p, std::size_t k) {
  if (k > n) return 0.0;
  return boost::math::pdf(boost::math::binomial(static_cast<double>(n), p), static_cast<double>(k));
}

double kolmogorov_q(double x) {
  if (x <= 0.0) return 1.0;
  if (x < 0.18) return 1.0;  // series converges slowly; Q is 1 to double precision here
  double sum = 0.0;
  for (int j = 1; j <= 100; ++j) {
    const double term = std::exp(-2.0 * j * j * x * x);
    sum += (j % 2 == 1 ? term : -term);
    if (term < 1e-17) break;
  }
  return std::clamp(2.0 * sum, 0.0, 1.0);
}

KsResult ks_two_sample(std::vector<double> a, std::vector<double> b) {
  if (a.empty() || b.empty()) throw ParameterError("KS test needs two non-empty samples");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    const double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] <= x) ++i;
    while (j < b.size() && b[j] <= x) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  const double ne = std::sqrt(na * nb / (na + nb));
  return {d, kolmogorov_q((ne + 0.12 + 0.11 / ne) * d)};
}

double normal_two_sided_p(double z) { return std::erfc(std::abs(z) / std::sqrt(2.0)); }

}  // namespace gibbs::stats
