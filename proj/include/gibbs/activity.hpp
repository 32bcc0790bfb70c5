#pragma once

#include <cmath>
#include <optional>
#include <vector>

#include "gibbs/configuration.hpp"
#include "gibbs/geometry.hpp"
#include "gibbs/potential.hpp"
#include "gibbs/spatial_grid.hpp"

namespace gibbs {

/// Axis-aligned region [lo, hi] where the activity is forced to zero.
struct ZeroRegion {
  Point lo;
  Point hi;
  bool contains(const Point& p) const noexcept;
};

/// Activity function lambda(y) = lambda * e^{-t} * prod_{a in A} e^{-phi(a, y)},
/// set to zero inside any zero region.
///
/// A constant activity is the special case with no tilt, pins or zero regions.
/// Births are proposed at the peak rate `peak()` per unit volume and thinned by
/// `relative_weight(y)`.
class ActivityField {
 public:
  ActivityField(double base = 0.0);  // NOLINT: implicit from a constant activity

  double base() const noexcept { return base_; }
  double tilt() const noexcept { return tilt_; }
  /// sup_y lambda(y) = base * e^{-tilt}.
  double peak() const noexcept { return peak_; }
  bool is_constant() const noexcept { return !pins_ && zero_regions_.empty(); }

  /// Multiplies the activity by e^{-t}; t accumulates across calls.
  ActivityField& with_tilt(double t);
  /// Pins the points of A: the activity near each pinned a picks up e^{-phi(a, .)}.
  ActivityField& with_pins(const Domain& domain, const PairPotential& phi, const Configuration& pins);
  ActivityField& with_zero_region(ZeroRegion region);

  const Configuration& pins() const noexcept { return pin_config_; }

  /// lambda(y) / peak() in [0, 1].
  double relative_weight(const Point& y) const;
  double at(const Point& y) const { return peak_ * relative_weight(y); }

 private:
  struct PinSet {
    PairPotential phi;
    SpatialGrid grid;
  };

  double base_;
  double tilt_ = 0.0;
  double peak_;
  Configuration pin_config_;
  std::optional<PinSet> pins_;
  std::vector<ZeroRegion> zero_regions_;
};

}  // namespace gibbs
