#include "gibbs/planning.hpp"

#include <cmath>
#include <numbers>

#include "gibbs/errors.hpp"

namespace gibbs {

double plan_time(double epsilon, std::size_t initial_count, double gamma, double lambda_total) {
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw ParameterError("epsilon must lie in (0, 1)");
  if (!(gamma > 0.0 && gamma <= 1.0)) throw ParameterError("gamma must lie in (0, 1]");
  if (!(lambda_total >= 0.0) || !std::isfinite(lambda_total)) throw ParameterError("lambda|Lambda| must be >= 0");
  double t = (lambda_total / 2.0 + std::log(1.0 / epsilon)) / gamma;
  if (initial_count > 0) t += std::log(2.0 * static_cast<double>(initial_count) / epsilon);
  return t;
}

double spectral_independence_bound(std::size_t dimension, double delta) {
  if (dimension == 0) throw ParameterError("dimension must be >= 1");
  if (!(delta > 0.0)) throw ParameterError("delta must be positive");
  const double d = static_cast<double>(dimension);
  const double log_term = 1.0 + (d + 1.0) * std::numbers::ln2 + std::lgamma(d + 1.0) - d * std::log(delta);
  return 1.0 + std::exp(log_term);
}

SpectralGapBound default_gamma(std::size_t dimension, double delta) {
  if (!(delta > 0.0 && delta < 1.0)) throw ParameterError("delta must lie in (0, 1)");
  const double log_gamma = -std::numbers::ln2 - 2.0 * spectral_independence_bound(dimension, delta);
  return {std::exp(log_gamma), log_gamma};
}

}  // namespace gibbs
