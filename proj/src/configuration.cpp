#include "gibbs/configuration.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <unordered_set>

#include "gibbs/errors.hpp"

namespace gibbs {

Configuration Configuration::from_points(std::span<const Point> points, std::uint64_t first_id) {
  std::vector<Particle> ps;
  ps.reserve(points.size());
  for (const Point& p : points) ps.push_back({ParticleId{first_id++}, p});
  return Configuration(std::move(ps));
}

std::vector<Point> Configuration::positions() const {
  std::vector<Point> out;
  out.reserve(particles_.size());
  for (const auto& p : particles_) out.push_back(p.position);
  return out;
}

Particle Configuration::remove_at(std::size_t i) {
  Particle removed = particles_[i];
  particles_[i] = particles_.back();
  particles_.pop_back();
  return removed;
}

std::optional<std::size_t> Configuration::find(ParticleId id) const noexcept {
  for (std::size_t i = 0; i < particles_.size(); ++i) {
    if (particles_[i].id == id) return i;
  }
  return std::nullopt;
}

std::uint64_t Configuration::next_free_id() const noexcept {
  std::uint64_t next = 0;
  for (const auto& p : particles_) next = std::max(next, to_underlying(p.id) + 1);
  return next;
}

Energy Configuration::energy(const PairPotential& phi) const {
  Energy h;
  for (std::size_t i = 0; i < particles_.size(); ++i) {
    for (std::size_t j = i + 1; j < particles_.size(); ++j) {
      h += phi(particles_[i].position, particles_[j].position);
      if (h.is_infinite()) return h;
    }
  }
  return h;
}

void validate_configuration(const Configuration& eta, const Domain& domain, const PairPotential& phi) {
  std::unordered_set<std::uint64_t> ids;
  for (const auto& p : eta.particles()) {
    if (!domain.contains(p.position)) {
      throw ParameterError("particle " + std::to_string(to_underlying(p.id)) + " at " + to_string(p.position) +
                           " lies outside the domain");
    }
    if (!ids.insert(to_underlying(p.id)).second) {
      throw ParameterError("duplicate particle id " + std::to_string(to_underlying(p.id)));
    }
  }
  if (eta.energy(phi).is_infinite()) throw ParameterError("configuration has overlapping hard spheres");
}

bool is_valid_configuration(const Configuration& eta, const Domain& domain, const PairPotential& phi) {
  try {
    validate_configuration(eta, domain, phi);
    return true;
  } catch (const ParameterError&) {
    return false;
  }
}

double min_pair_distance(const Configuration& eta) {
  double best = std::numeric_limits<double>::infinity();
  const auto ps = eta.particles();
  for (std::size_t i = 0; i < ps.size(); ++i) {
    for (std::size_t j = i + 1; j < ps.size(); ++j) best = std::min(best, distance(ps[i].position, ps[j].position));
  }
  return best;
}

Energy delta_energy_exhaustive(const Configuration& eta, const Point& x, const PairPotential& phi) {
  Energy h;
  for (const auto& p : eta.particles()) {
    h += phi(x, p.position);
    if (h.is_infinite()) break;
  }
  return h;
}

}  // namespace gibbs

namespace gibbs {

std::optional<std::size_t> packing_bound(const Domain& domain, const PairPotential& phi) {
  if (!phi.is_hard_sphere()) return std::nullopt;
  const double r = phi.radius();
  if (domain.dimension() == 1) {
    // Relative slack so that L an exact multiple of 2r is not lost to rounding.
    return static_cast<std::size_t>(std::floor(domain.side(0) / (2.0 * r) * (1.0 + 1e-12))) + 1;
  }
  double hull = 1.0;
  for (double s : domain.sides()) hull *= s + 2.0 * r;
  const double ball = unit_ball_volume(domain.dimension()) * std::pow(r, static_cast<double>(domain.dimension()));
  return static_cast<std::size_t>(std::floor(hull / ball));
}

}  // namespace gibbs
