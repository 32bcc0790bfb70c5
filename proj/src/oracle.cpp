#include "gibbs/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include <boost/math/special_functions/gamma.hpp>

#include "gibbs/errors.hpp"
#include "gibbs/quadrature.hpp"
#include "gibbs/stats.hpp"

namespace gibbs::oracle {

namespace {

constexpr double kQuadratureTolerance = 1e-10;
constexpr double kRelativeTail = 1e-12;

// log of the k-th Tonks term; -inf where the term vanishes.
double log_tonks_term(const TonksModel& m, std::size_t k) {
  if (k == 0) return 0.0;
  const double span = m.length - static_cast<double>(k - 1) * m.diameter;
  if (span <= 0.0 || m.activity == 0.0) return -std::numeric_limits<double>::infinity();
  const double kd = static_cast<double>(k);
  return kd * std::log(m.activity) + kd * std::log(span) - std::lgamma(kd + 1.0);
}

// Partition function of a free segment of length l (1 for l <= 0).
double segment_partition(double length, double diameter, double activity) {
  if (length <= 0.0) return 1.0;
  return tonks_partition({length, diameter, activity});
}

}  // namespace

void TonksModel::validate() const {
  if (!(length > 0.0) || !std::isfinite(length)) throw ParameterError("Tonks length must be positive");
  if (!(diameter > 0.0) || !std::isfinite(diameter)) throw ParameterError("rod diameter must be positive");
  if (!(activity >= 0.0) || !std::isfinite(activity)) throw ParameterError("activity must be >= 0");
}

std::size_t tonks_max_count(const TonksModel& m) {
  // Largest k with L - (k-1) sigma > 0.
  std::size_t k = static_cast<std::size_t>(std::floor(m.length / m.diameter)) + 1;
  while (k > 0 && m.length - static_cast<double>(k - 1) * m.diameter <= 0.0) --k;
  return k;
}

double log_tonks_partition(const TonksModel& m) {
  m.validate();
  std::vector<double> logs;
  for (std::size_t k = 0; k <= tonks_max_count(m); ++k) logs.push_back(log_tonks_term(m, k));
  return stats::log_sum_exp(logs);
}

double tonks_partition(const TonksModel& m) { return std::exp(log_tonks_partition(m)); }

double tonks_card_pmf(const TonksModel& m, std::size_t k) {
  if (k > tonks_max_count(m)) return 0.0;
  return std::exp(log_tonks_term(m, k) - log_tonks_partition(m));
}

std::vector<double> tonks_card_pmf_all(const TonksModel& m) {
  const double log_z = log_tonks_partition(m);
  std::vector<double> pmf;
  for (std::size_t k = 0; k <= tonks_max_count(m); ++k) pmf.push_back(std::exp(log_tonks_term(m, k) - log_z));
  return pmf;
}

double tonks_mean_count(const TonksModel& m) {
  const auto pmf = tonks_card_pmf_all(m);
  std::vector<double> terms;
  for (std::size_t k = 0; k < pmf.size(); ++k) terms.push_back(static_cast<double>(k) * pmf[k]);
  return stats::stable_sum(std::move(terms));
}

double one_point_density(const TonksModel& m, double x) {
  m.validate();
  if (!(x >= 0.0 && x <= m.length)) throw ParameterError("position outside [0, L]");
  if (m.activity == 0.0) return 0.0;
  const double left = segment_partition(x - m.diameter, m.diameter, m.activity);
  const double right = segment_partition(m.length - x - m.diameter, m.diameter, m.activity);
  return m.activity * left * right / tonks_partition(m);
}

Configuration sample_tonks(const TonksModel& m, Rng& rng, std::uint64_t first_id) {
  const auto pmf = tonks_card_pmf_all(m);
  double u = rng.uniform();
  std::size_t k = 0;
  while (k + 1 < pmf.size() && u >= pmf[k]) {
    u -= pmf[k];
    ++k;
  }
  const double free_length = m.length - (k > 0 ? static_cast<double>(k - 1) * m.diameter : 0.0);
  std::vector<double> xs(k);
  for (auto& x : xs) x = rng.uniform() * free_length;
  std::sort(xs.begin(), xs.end());
  std::vector<Point> points;
  for (std::size_t i = 0; i < k; ++i) points.push_back(Point{xs[i] + static_cast<double>(i) * m.diameter});
  return Configuration::from_points(points, first_id);
}

IntervalActivity::IntervalActivity(std::vector<ActivityInterval> intervals, double diameter)
    : intervals_(std::move(intervals)), diameter_(diameter) {
  if (!(diameter > 0.0)) throw ParameterError("rod diameter must be positive");
  for (std::size_t i = 0; i < intervals_.size(); ++i) {
    const auto& iv = intervals_[i];
    if (!(iv.lo >= 0.0 && iv.hi >= iv.lo) || !std::isfinite(iv.hi)) {
      throw ParameterError("interval bounds must satisfy 0 <= lo <= hi");
    }
    if (!(iv.activity >= 0.0) || !std::isfinite(iv.activity)) throw ParameterError("interval activity must be >= 0");
    if (i > 0 && !(intervals_[i - 1].hi < iv.lo)) throw ParameterError("intervals must be sorted and disjoint");
  }
}

double IntervalActivity::total_activity() const noexcept {
  double s = 0.0;
  for (const auto& iv : intervals_) s += iv.activity * (iv.hi - iv.lo);
  return s;
}

bool IntervalActivity::separated() const noexcept {
  for (std::size_t i = 1; i < intervals_.size(); ++i) {
    if (intervals_[i].lo - intervals_[i - 1].hi < diameter_) return false;
  }
  return true;
}

std::size_t IntervalActivity::packing_bound() const noexcept {
  std::size_t n = 0;
  for (const auto& iv : intervals_) {
    if (iv.activity > 0.0) n += static_cast<std::size_t>(std::floor((iv.hi - iv.lo) / diameter_)) + 1;
  }
  return n;
}

std::size_t default_kmax(const IntervalActivity& act) { return act.packing_bound(); }

double poisson_tail_mass(double a, std::size_t kmax) {
  if (a <= 0.0) return 0.0;
  // e^a * P(Pois(a) > kmax) = e^a * P(kmax + 1, a) (regularised lower gamma).
  return std::exp(a) * boost::math::gamma_p(static_cast<double>(kmax) + 1.0, a);
}

double restricted_partition(const IntervalActivity& act, std::size_t kmax) {
  if (!act.separated()) return restricted_partition_quadrature(act, kmax);
  double z = 1.0;
  for (const auto& iv : act.intervals()) {
    if (iv.hi > iv.lo && iv.activity > 0.0) z *= tonks_partition({iv.hi - iv.lo, act.diameter(), iv.activity});
  }
  return z;
}

double restricted_partition_quadrature(const IntervalActivity& act, std::size_t kmax) {
  const double sigma = act.diameter();

  // Pieces on which lambda(x) G_{k-1}(x + sigma) is a polynomial: interval
  // endpoints shifted left by multiples of sigma.
  struct Piece {
    double lo, hi, activity;
  };
  std::vector<Piece> pieces;
  for (const auto& iv : act.intervals()) {
    if (!(iv.hi > iv.lo) || iv.activity == 0.0) continue;
    std::vector<double> cuts{iv.lo, iv.hi};
    for (const auto& other : act.intervals()) {
      for (std::size_t j = 0; j <= kmax; ++j) {
        for (double e : {other.lo, other.hi}) {
          const double c = e - static_cast<double>(j) * sigma;
          if (c > iv.lo && c < iv.hi) cuts.push_back(c);
        }
      }
    }
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) pieces.push_back({cuts[i], cuts[i + 1], iv.activity});
  }

  const double piece_tol = kQuadratureTolerance / static_cast<double>(std::max<std::size_t>(pieces.size(), 1));
  // G(k, y): ordered configurations of k rods, all at positions >= y.
  auto g = [&](auto&& self, std::size_t k, double y) -> double {
    if (k == 0) return 1.0;
    double total = 0.0;
    for (const auto& p : pieces) {
      if (p.hi <= y) continue;
      const double a = std::max(p.lo, y);
      auto integrand = [&](double x) { return p.activity * self(self, k - 1, x + sigma); };
      total += adaptive_simpson(integrand, a, p.hi, piece_tol);
    }
    return total;
  };

  std::vector<double> terms{1.0};
  const double start = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 1; k <= kmax; ++k) {
    const double term = g(g, k, start);
    if (term <= 0.0) break;
    terms.push_back(term);
  }
  const double z = stats::stable_sum(std::move(terms));

  if (kmax < act.packing_bound()) {
    const double tail = poisson_tail_mass(act.total_activity(), kmax);
    if (tail > kRelativeTail * z) {
      throw TruncationError("restricted_partition: kmax = " + std::to_string(kmax) +
                            " leaves Poisson tail bound " + std::to_string(tail));
    }
  }
  return z;
}

McEstimate mc_partition(const Domain& domain, const PairPotential& phi, double activity, std::size_t kmax,
                        std::size_t n_mc, std::uint64_t seed, double tail_tolerance) {
  if (!(activity >= 0.0)) throw ParameterError("activity must be >= 0");
  if (n_mc == 0) throw ParameterError("n_mc must be >= 1");
  const double a = activity * domain.volume();

  std::vector<double> terms{1.0};
  double variance = 0.0;
  double log_coef = 0.0;
  std::vector<Point> pts;
  for (std::size_t k = 1; k <= kmax && a > 0.0; ++k) {
    log_coef += std::log(a) - std::log(static_cast<double>(k));
    const double coef = std::exp(log_coef);
    Rng rng(seed, k);
    stats::RunningMean weight;
    for (std::size_t s = 0; s < n_mc; ++s) {
      pts.clear();
      Energy h;
      for (std::size_t i = 0; i < k; ++i) {
        Point y = uniform_point(domain, rng);
        for (const auto& x : pts) h += phi(x, y);
        pts.push_back(y);
      }
      weight.add(birth_acceptance(h));
    }
    terms.push_back(coef * weight.mean());
    variance += coef * coef * weight.variance() / static_cast<double>(n_mc);
  }
  const double z = stats::stable_sum(std::move(terms));

  const auto bound = packing_bound(domain, phi);
  if (!bound || kmax < *bound) {
    const double tail = poisson_tail_mass(a, kmax);
    if (tail > tail_tolerance * z) {
      throw TruncationError("mc_partition: kmax = " + std::to_string(kmax) + " leaves Poisson tail bound " +
                            std::to_string(tail));
    }
  }
  return {z, std::sqrt(variance)};
}

}  // namespace gibbs::oracle
