#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <string>

#include "gibbs/geometry.hpp"

namespace gibbs {

/// Energy value in [0, inf]. Adding anything to an infinite energy stays infinite.
class Energy {
 public:
  constexpr Energy() = default;
  constexpr explicit Energy(double value) : value_(value) {}

  static constexpr Energy zero() { return Energy(0.0); }
  static constexpr Energy infinite() { return Energy(std::numeric_limits<double>::infinity()); }

  constexpr double value() const noexcept { return value_; }
  constexpr bool is_infinite() const noexcept { return value_ == std::numeric_limits<double>::infinity(); }

  constexpr Energy& operator+=(Energy other) noexcept {
    if (!is_infinite()) value_ = other.is_infinite() ? other.value_ : value_ + other.value_;
    return *this;
  }
  friend constexpr Energy operator+(Energy a, Energy b) noexcept { return a += b; }
  friend constexpr auto operator<=>(Energy, Energy) = default;

 private:
  double value_ = 0.0;
};

/// Probability e^{-dH} of accepting a proposed birth.
///
/// Exactly 1 for dH = 0 and exactly 0 for dH = inf. Throws InvalidPotentialError
/// for negative or NaN input, which would mean the potential is not repulsive.
double birth_acceptance(Energy delta);

struct HardSphere {
  double radius;
};

/// Penetrable step potential: strength J inside distance R, zero outside.
struct SoftCore {
  double strength;
  double range;
};

/// Repulsive finite-range pair potential.
///
/// Both supported kinds are step functions of the distance: a constant
/// (possibly infinite) energy strictly inside the interaction range and zero
/// at or beyond it. Distances are compared squared.
class PairPotential {
 public:
  enum class Kind { kHardSphere, kSoftCore };

  PairPotential(HardSphere hs);
  PairPotential(SoftCore sc);

  static PairPotential hard_sphere(double radius) { return PairPotential(HardSphere{radius}); }
  static PairPotential soft_core(double strength, double range) { return PairPotential(SoftCore{strength, range}); }
  /// phi == 0 everywhere (ideal gas); represented as a soft core with zero strength.
  static PairPotential none(double range = 1.0) { return soft_core(0.0, range); }

  Kind kind() const noexcept { return kind_; }
  bool is_hard_sphere() const noexcept { return kind_ == Kind::kHardSphere; }
  /// Sphere radius r (hard spheres only; 0 otherwise).
  double radius() const noexcept { return kind_ == Kind::kHardSphere ? range_ / 2.0 : 0.0; }
  /// Step height J (infinite for hard spheres).
  double strength() const noexcept { return inside_.value(); }
  /// Distance beyond which phi vanishes: 2r or R.
  double range() const noexcept { return range_; }
  double range_squared() const noexcept { return range_sq_; }

  Energy operator()(const Point& x, const Point& y) const noexcept {
    return squared_distance(x, y) < range_sq_ ? inside_ : Energy::zero();
  }
  Energy at_squared_distance(double d2) const noexcept { return d2 < range_sq_ ? inside_ : Energy::zero(); }

  /// Temperedness constant C_phi = integral of |1 - e^{-phi(x,y)}| dy over R^d.
  /// For hard spheres this is (2r)^d vol(B_d).
  double temperedness(std::size_t dimension) const;

  std::string describe() const;

 private:
  Kind kind_;
  double range_;
  double range_sq_;
  Energy inside_;
};

}  // namespace gibbs
