#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "gibbs/geometry.hpp"
#include "gibbs/potential.hpp"

namespace gibbs {

/// Identity tag of a particle. Assigned at birth, never reused within a chain.
enum class ParticleId : std::uint64_t {};

constexpr std::uint64_t to_underlying(ParticleId id) noexcept { return static_cast<std::uint64_t>(id); }

struct Particle {
  ParticleId id;
  Point position;

  friend bool operator==(const Particle&, const Particle&) = default;
};

/// Finite set of identified points. Order is not meaningful.
class Configuration {
 public:
  Configuration() = default;
  explicit Configuration(std::vector<Particle> particles) : particles_(std::move(particles)) {}

  /// Builds a configuration with ids first_id, first_id + 1, ...
  static Configuration from_points(std::span<const Point> points, std::uint64_t first_id = 0);

  std::size_t size() const noexcept { return particles_.size(); }
  bool empty() const noexcept { return particles_.empty(); }
  std::span<const Particle> particles() const noexcept { return particles_; }
  const Particle& operator[](std::size_t i) const noexcept { return particles_[i]; }

  std::vector<Point> positions() const;

  void add(Particle p) { particles_.push_back(std::move(p)); }
  /// Swap-removes entry i and returns it.
  Particle remove_at(std::size_t i);

  std::optional<std::size_t> find(ParticleId id) const noexcept;
  bool contains(ParticleId id) const noexcept { return find(id).has_value(); }

  /// Smallest id strictly greater than every id present (0 if empty).
  std::uint64_t next_free_id() const noexcept;

  /// H(eta) = sum over unordered pairs of phi, by exhaustive scan.
  Energy energy(const PairPotential& phi) const;

  friend bool operator==(const Configuration&, const Configuration&) = default;

 private:
  std::vector<Particle> particles_;
};

/// Throws ParameterError unless every point lies in `domain`, ids are unique
/// and H(eta) is finite.
void validate_configuration(const Configuration& eta, const Domain& domain, const PairPotential& phi);

bool is_valid_configuration(const Configuration& eta, const Domain& domain, const PairPotential& phi);

/// Minimum pairwise center distance (infinity for fewer than two particles).
double min_pair_distance(const Configuration& eta);

/// Sum of phi(x, y) over y in eta by exhaustive scan.
Energy delta_energy_exhaustive(const Configuration& eta, const Point& x, const PairPotential& phi);

}  // namespace gibbs

namespace gibbs {

/// Upper bound on the number of hard spheres that fit in `domain` (nullopt for
/// potentials without a hard core). Exact in 1D: floor(L / 2r) + 1. In d >= 2
/// it is the volume bound prod(L_i + 2r) / vol(B_d(r)).
std::optional<std::size_t> packing_bound(const Domain& domain, const PairPotential& phi);

}  // namespace gibbs
