#include "gibbs/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "gibbs/errors.hpp"

namespace gibbs {

namespace {

void check_dimension(std::size_t d) {
  if (d == 0 || d > kMaxDimension) {
    throw ParameterError("point dimension must be in [1, " + std::to_string(kMaxDimension) +
                         "], got " + std::to_string(d));
  }
}

}  // namespace

Point::Point(std::initializer_list<double> coords)
    : Point(std::span<const double>(coords.begin(), coords.size())) {}

Point::Point(std::span<const double> coords) {
  check_dimension(coords.size());
  for (double c : coords) {
    if (!std::isfinite(c)) throw ParameterError("point coordinates must be finite");
  }
  std::copy(coords.begin(), coords.end(), coords_.begin());
  dim_ = static_cast<std::uint8_t>(coords.size());
}

Point Point::zeros(std::size_t dimension) {
  check_dimension(dimension);
  Point p;
  p.dim_ = static_cast<std::uint8_t>(dimension);
  return p;
}

bool operator==(const Point& a, const Point& b) noexcept {
  if (a.dim_ != b.dim_) return false;
  return std::equal(a.coords_.begin(), a.coords_.begin() + a.dim_, b.coords_.begin());
}

double distance(const Point& a, const Point& b) noexcept { return std::sqrt(squared_distance(a, b)); }

Domain::Domain(std::vector<double> sides) : sides_(std::move(sides)) {
  check_dimension(sides_.size());
  volume_ = 1.0;
  for (double s : sides_) {
    if (!(s > 0.0) || !std::isfinite(s)) throw ParameterError("domain side lengths must be positive and finite");
    volume_ *= s;
  }
}

bool Domain::contains(const Point& p) const noexcept {
  if (p.dimension() != dimension()) return false;
  for (std::size_t i = 0; i < dimension(); ++i) {
    if (p[i] < 0.0 || p[i] > sides_[i]) return false;
  }
  return true;
}

Point uniform_point(const Domain& domain, Rng& rng) {
  Point p = Point::zeros(domain.dimension());
  for (std::size_t i = 0; i < domain.dimension(); ++i) p[i] = rng.uniform() * domain.side(i);
  return p;
}

double unit_ball_volume(std::size_t dimension) {
  const double d = static_cast<double>(dimension);
  return std::pow(std::numbers::pi, d / 2.0) / std::tgamma(d / 2.0 + 1.0);
}

std::string to_string(const Point& p) {
  std::ostringstream os;
  os << '(';
  for (std::size_t i = 0; i < p.dimension(); ++i) os << (i ? ", " : "") << p[i];
  os << ')';
  return os.str();
}

}  // namespace gibbs
