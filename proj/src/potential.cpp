#include "gibbs/potential.hpp"

#include <sstream>

#include "gibbs/errors.hpp"

namespace gibbs {

double birth_acceptance(Energy delta) {
  const double v = delta.value();
  if (std::isnan(v) || v < 0.0) {
    throw InvalidPotentialError("energy difference must be >= 0 for a repulsive potential, got " +
                                std::to_string(v));
  }
  if (delta.is_infinite()) return 0.0;
  if (v == 0.0) return 1.0;
  return std::exp(-v);
}

PairPotential::PairPotential(HardSphere hs)
    : kind_(Kind::kHardSphere), range_(2.0 * hs.radius), range_sq_(range_ * range_), inside_(Energy::infinite()) {
  if (!(hs.radius > 0.0) || !std::isfinite(hs.radius)) throw ParameterError("hard sphere radius must be positive");
}

PairPotential::PairPotential(SoftCore sc)
    : kind_(Kind::kSoftCore), range_(sc.range), range_sq_(sc.range * sc.range), inside_(sc.strength) {
  if (!(sc.range > 0.0) || !std::isfinite(sc.range)) throw ParameterError("soft core range must be positive");
  if (!(sc.strength >= 0.0)) throw ParameterError("soft core strength must be >= 0 (repulsive)");
}

double PairPotential::temperedness(std::size_t dimension) const {
  const double ball = unit_ball_volume(dimension) * std::pow(range_, static_cast<double>(dimension));
  if (kind_ == Kind::kHardSphere) return ball;
  return -std::expm1(-inside_.value()) * ball;
}

std::string PairPotential::describe() const {
  std::ostringstream os;
  if (kind_ == Kind::kHardSphere) {
    os << "hard_sphere(r=" << radius() << ")";
  } else {
    os << "soft_core(J=" << strength() << ", R=" << range_ << ")";
  }
  return os.str();
}

}  // namespace gibbs
