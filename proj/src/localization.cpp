#include "gibbs/localization.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "gibbs/errors.hpp"
#include "gibbs/oracle.hpp"
#include "gibbs/planning.hpp"
#include "gibbs/stats.hpp"

namespace gibbs::localization {

namespace {

double segment_partition(double length, double diameter, double activity) {
  if (length <= 0.0 || activity == 0.0) return 1.0;
  return oracle::tonks_partition({length, diameter, activity});
}

}  // namespace

HardRodModel HardRodModel::from(const Domain& domain, const PairPotential& phi) {
  if (domain.dimension() != 1) throw UnsupportedError("localization is evaluated exactly only in one dimension");
  if (!phi.is_hard_sphere()) throw UnsupportedError("localization requires a hard-core potential");
  return {domain.side(0), phi.range()};
}

PinnedTiltedMeasure::PinnedTiltedMeasure(HardRodModel model, double base_activity, double tilt,
                                         std::vector<double> pins)
    : model_(model), base_(base_activity), tilt_(tilt), activity_(base_activity * std::exp(-tilt)),
      pins_(std::move(pins)) {
  if (!(model_.length > 0.0) || !(model_.diameter > 0.0)) throw ParameterError("invalid hard-rod model");
  if (!(base_activity >= 0.0) || !(tilt >= 0.0)) throw ParameterError("activity and tilt must be >= 0");
  std::sort(pins_.begin(), pins_.end());
  for (std::size_t i = 0; i < pins_.size(); ++i) {
    if (pins_[i] < 0.0 || pins_[i] > model_.length) throw ParameterError("pin outside [0, L]");
    if (i > 0 && pins_[i] - pins_[i - 1] < model_.diameter) throw ConsistencyError("pins overlap");
  }

  const double sigma = model_.diameter;
  double cursor = 0.0;
  for (double a : pins_) {
    if (a - sigma > cursor) segments_.push_back({cursor, a - sigma});
    cursor = std::max(cursor, a + sigma);
  }
  if (model_.length > cursor) segments_.push_back({cursor, model_.length});
  for (std::size_t i = 1; i < segments_.size(); ++i) {
    if (segments_[i].lo - segments_[i - 1].hi < 2.0 * sigma * (1.0 - 1e-12)) {
      throw ConsistencyError("free segments closer than 2 sigma");
    }
  }
}

double PinnedTiltedMeasure::tilde_intensity(double x) const {
  if (!(x >= 0.0 && x <= model_.length)) throw ParameterError("position outside [0, L]");
  if (activity_ == 0.0) return 0.0;
  const double sigma = model_.diameter;
  for (const auto& s : segments_) {
    if (x < s.lo || x > s.hi) continue;
    const double left = segment_partition(x - sigma - s.lo, sigma, activity_);
    const double right = segment_partition(s.hi - x - sigma, sigma, activity_);
    return activity_ * left * right / segment_partition(s.length(), sigma, activity_);
  }
  return 0.0;
}

std::vector<double> PinnedTiltedMeasure::free_count_pmf() const {
  std::vector<double> pmf{1.0};
  for (const auto& s : segments_) {
    if (activity_ == 0.0) break;
    const auto seg = oracle::tonks_card_pmf_all({s.length(), model_.diameter, activity_});
    std::vector<double> next(pmf.size() + seg.size() - 1, 0.0);
    for (std::size_t i = 0; i < pmf.size(); ++i) {
      for (std::size_t j = 0; j < seg.size(); ++j) next[i + j] += pmf[i] * seg[j];
    }
    pmf = std::move(next);
  }
  return pmf;
}

double PinnedTiltedMeasure::count_probability(std::size_t k) const {
  if (k < pins_.size()) return 0.0;
  const auto pmf = free_count_pmf();
  const std::size_t j = k - pins_.size();
  return j < pmf.size() ? pmf[j] : 0.0;
}

double tilde_intensity(const PinnedTiltedMeasure& m, const Point& x) {
  if (x.dimension() != 1) throw UnsupportedError("tilde_intensity is implemented for 1D hard rods only");
  return m.tilde_intensity(x[0]);
}

PinningRealization simulate_pinning(double base_activity, double horizon, const HardRodModel& model, Rng& rng) {
  if (!(base_activity >= 0.0) || !(horizon >= 0.0)) throw ParameterError("activity and horizon must be >= 0");
  PinningRealization out;
  if (base_activity == 0.0) return out;
  const double rate = base_activity * model.length;
  double t = 0.0;
  while (true) {
    t += rng.exponential(rate);
    if (t > horizon) break;
    const double x = rng.uniform() * model.length;
    const double l = rng.uniform();
    ++out.proposals;
    const PinnedTiltedMeasure current(model, base_activity, t, out.pins);
    if (l < current.tilde_intensity(x) / base_activity) {
      const auto pos = std::lower_bound(out.pins.begin(), out.pins.end(), x);
      if ((pos != out.pins.end() && *pos - x < model.diameter) ||
          (pos != out.pins.begin() && x - *(pos - 1) < model.diameter)) {
        throw ConsistencyError("pin accepted inside an excluded zone");
      }
      out.pins.insert(pos, x);
      out.acceptance_times.push_back(t);
    }
  }
  return out;
}

validation::IdentityReport martingale_check(double base_activity, double horizon, const HardRodModel& model,
                                            std::size_t k, std::size_t n_runs, std::uint64_t seed,
                                            double threshold) {
  if (n_runs == 0) throw ParameterError("n_runs must be >= 1");
  const double target = oracle::tonks_card_pmf({model.length, model.diameter, base_activity}, k);
  stats::RunningMean value;
  for (std::size_t i = 0; i < n_runs; ++i) {
    Rng rng(seed, i);
    const auto run = simulate_pinning(base_activity, horizon, model, rng);
    value.add(PinnedTiltedMeasure(model, base_activity, horizon, run.pins).count_probability(k));
  }
  auto r = validation::z_report("martingale[k=" + std::to_string(k) + "]", value.mean(), target, value.stderr_of_mean(), threshold);
  r.details = {{"k", static_cast<double>(k)}, {"tau", horizon}, {"runs", static_cast<double>(n_runs)}};
  return r;
}

validation::IdentityReport empty_pinning_check(double base_activity, double horizon, const HardRodModel& model,
                                               std::size_t n_runs, std::uint64_t seed, double threshold) {
  if (n_runs == 0) throw ParameterError("n_runs must be >= 1");
  const double z0 = oracle::tonks_partition({model.length, model.diameter, base_activity});
  const double z1 = oracle::tonks_partition({model.length, model.diameter, base_activity * std::exp(-horizon)});
  stats::RunningMean empty;
  for (std::size_t i = 0; i < n_runs; ++i) {
    Rng rng(seed, i);
    empty.add(simulate_pinning(base_activity, horizon, model, rng).pins.empty() ? 1.0 : 0.0);
  }
  return validation::z_report("empty_pinning", empty.mean(), z1 / z0, empty.stderr_of_mean(), threshold);
}

double default_delta(double base_activity, const HardRodModel& model) {
  return 1.0 - std::log(base_activity * model.temperedness());
}

VarianceConservationResult variance_conservation_check(double lambda0, double lambda1, const HardRodModel& model,
                                                       std::size_t k, std::size_t n_runs, std::uint64_t seed,
                                                       std::optional<double> delta, double threshold) {
  if (!(lambda0 > 0.0) || !(lambda1 > 0.0)) throw ParameterError("activities must be positive");
  if (lambda1 > lambda0) throw ParameterError("lambda_1 must not exceed lambda_0");
  if (n_runs == 0) throw ParameterError("n_runs must be >= 1");
  const double d = delta.value_or(default_delta(lambda0, model));
  if (!(d > 0.0)) throw ParameterError("no positive delta satisfies lambda_0 <= e^{-delta} e / C_phi");

  const double tau = std::log(lambda0 / lambda1);
  const double p0 = oracle::tonks_card_pmf({model.length, model.diameter, lambda0}, k);
  const double var0 = p0 * (1.0 - p0);
  const double c = spectral_independence_bound(1, d);
  const double factor = std::pow(lambda1 / lambda0, c);

  stats::RunningMean var;
  for (std::size_t i = 0; i < n_runs; ++i) {
    Rng rng(seed, i);
    const auto run = simulate_pinning(lambda0, tau, model, rng);
    const double p = PinnedTiltedMeasure(model, lambda0, tau, run.pins).count_probability(k);
    var.add(p * (1.0 - p));
  }

  VarianceConservationResult out;
  out.delta = d;
  out.theoretical_constant = c;
  out.theoretical_factor = factor;
  out.observed_ratio = var0 > 0.0 ? var.mean() / var0 : std::numeric_limits<double>::quiet_NaN();

  auto& r = out.report;
  r = validation::z_report("variance_conservation[k=" + std::to_string(k) + "]", var.mean(), factor * var0,
                           var.stderr_of_mean(), threshold);
  if (var0 == 0.0) {
    r.status = "degenerate";
  } else {
    r.pass = r.z >= -threshold;
    r.status = r.pass ? "pass" : "fail";
  }
  r.details = {{"k", static_cast<double>(k)},
               {"observed_ratio", out.observed_ratio},
               {"theoretical_constant", c},
               {"theoretical_factor", factor},
               {"delta", d},
               {"var_nu0", var0}};
  return out;
}

}  // namespace gibbs::localization
