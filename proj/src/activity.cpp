#include "gibbs/activity.hpp"

#include "gibbs/errors.hpp"

namespace gibbs {

bool ZeroRegion::contains(const Point& p) const noexcept {
  for (std::size_t i = 0; i < p.dimension(); ++i) {
    if (p[i] < lo[i] || p[i] > hi[i]) return false;
  }
  return true;
}

ActivityField::ActivityField(double base) : base_(base), peak_(base) {
  if (!(base >= 0.0) || !std::isfinite(base)) throw ParameterError("activity must be finite and >= 0");
}

ActivityField& ActivityField::with_tilt(double t) {
  if (!(t >= 0.0) || !std::isfinite(t)) throw ParameterError("tilt must be finite and >= 0");
  tilt_ += t;
  peak_ = base_ * std::exp(-tilt_);
  return *this;
}

ActivityField& ActivityField::with_pins(const Domain& domain, const PairPotential& phi, const Configuration& pins) {
  if (pins_ && !(pins_->phi.kind() == phi.kind() && pins_->phi.range() == phi.range() &&
                 pins_->phi.strength() == phi.strength())) {
    throw ParameterError("all pins of an activity field must share one potential");
  }
  if (!pins_) pins_.emplace(PinSet{phi, SpatialGrid::for_potential(domain, phi)});
  for (const auto& p : pins.particles()) {
    pins_->grid.insert(p.id, p.position);
    pin_config_.add(p);
  }
  return *this;
}

ActivityField& ActivityField::with_zero_region(ZeroRegion region) {
  zero_regions_.push_back(std::move(region));
  return *this;
}

double ActivityField::relative_weight(const Point& y) const {
  for (const auto& z : zero_regions_) {
    if (z.contains(y)) return 0.0;
  }
  if (!pins_) return 1.0;
  return birth_acceptance(delta_energy(pins_->grid, y, pins_->phi));
}

}  // namespace gibbs
