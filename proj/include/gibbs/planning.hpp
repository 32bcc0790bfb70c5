#pragma once

#include <cstddef>

namespace gibbs {

/// Continuous time after which continuum Glauber started from a configuration
/// with `initial_count` points is within total variation `epsilon` of the
/// stationary law, given a spectral gap lower bound `gamma`:
///
///   T = (1/gamma) (lambda_total / 2 + ln(1/epsilon))             if |S| = 0
///   T = (1/gamma) (lambda_total / 2 + ln(1/epsilon)) + ln(2|S|/epsilon)  otherwise
///
/// `lambda_total` is lambda |Lambda|. Throws ParameterError unless
/// epsilon is in (0,1), gamma in (0,1] and lambda_total >= 0.
double plan_time(double epsilon, std::size_t initial_count, double gamma, double lambda_total);

struct SpectralGapBound {
  double gamma;
  double log_gamma;
};

/// Explicit hard-sphere spectral gap bound
///   gamma = (1/2) exp(-2 (1 + e 2^{d+1} d! / delta^d)),
/// valid for lambda <= e^{-delta} e / C_phi. Evaluated in log space; `gamma`
/// underflows to 0 long before `log_gamma` loses accuracy. The value is far
/// too small to be a practical horizon input (about 1e-96 for d = 1,
/// delta = 0.1).
SpectralGapBound default_gamma(std::size_t dimension, double delta);

/// Bound 1 + e 2^{d+1} d! / delta^d on the spectral independence constant of
/// hard spheres with lambda <= e^{-delta} e / C_phi.
double spectral_independence_bound(std::size_t dimension, double delta);

}  // namespace gibbs
