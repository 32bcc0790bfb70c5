#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

#include "gibbs/random.hpp"

namespace gibbs {

/// Largest ambient dimension supported by the samplers (the grid scans 3^d cells).
inline constexpr std::size_t kMaxDimension = 4;

/// A location in R^d with inline storage.
class Point {
 public:
  Point() = default;
  Point(std::initializer_list<double> coords);
  explicit Point(std::span<const double> coords);

  /// Point with `dimension` zero coordinates.
  static Point zeros(std::size_t dimension);

  std::size_t dimension() const noexcept { return dim_; }
  double operator[](std::size_t i) const noexcept { return coords_[i]; }
  double& operator[](std::size_t i) noexcept { return coords_[i]; }
  std::span<const double> coords() const noexcept { return {coords_.data(), dim_}; }

  friend bool operator==(const Point& a, const Point& b) noexcept;

 private:
  std::array<double, kMaxDimension> coords_{};
  std::uint8_t dim_ = 0;
};

inline double squared_distance(const Point& a, const Point& b) noexcept {
  double s = 0.0;
  for (std::size_t i = 0; i < a.dimension(); ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return s;
}

double distance(const Point& a, const Point& b) noexcept;

/// Axis-aligned box [0, L_1) x ... x [0, L_d) with free boundaries.
class Domain {
 public:
  explicit Domain(std::vector<double> sides);

  /// The interval [0, length).
  static Domain interval(double length) { return Domain({length}); }

  std::size_t dimension() const noexcept { return sides_.size(); }
  std::span<const double> sides() const noexcept { return sides_; }
  double side(std::size_t i) const noexcept { return sides_[i]; }
  double volume() const noexcept { return volume_; }

  /// Closed-box membership; points on the upper faces count as inside.
  bool contains(const Point& p) const noexcept;

  friend bool operator==(const Domain&, const Domain&) = default;

 private:
  std::vector<double> sides_;
  double volume_ = 0.0;
};

/// Each coordinate independently uniform on [0, L_i).
Point uniform_point(const Domain& domain, Rng& rng);

/// Volume of the unit ball in R^d.
double unit_ball_volume(std::size_t dimension);

std::string to_string(const Point& p);

}  // namespace gibbs
