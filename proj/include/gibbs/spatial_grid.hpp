#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <vector>

#include "gibbs/configuration.hpp"
#include "gibbs/geometry.hpp"
#include "gibbs/potential.hpp"

namespace gibbs {

/// Uniform cell list over a box.
///
/// Cells have side equal to the interaction range, so every particle within
/// range of a point x sits in the cell of x or one of its (up to 3^d - 1)
/// neighbours, diagonals included. Cell index along axis i is
/// floor(x_i / side), clamped to the last cell for points on the upper face.
/// Entries carry a copy of the particle position so neighbour scans never
/// touch the configuration.
class SpatialGrid {
 public:
  struct Entry {
    ParticleId id;
    Point position;
  };

  SpatialGrid(const Domain& domain, double cell_side);

  static SpatialGrid for_potential(const Domain& domain, const PairPotential& phi) {
    return SpatialGrid(domain, phi.range());
  }
  /// Grid holding every particle of `eta`.
  static SpatialGrid build(const Domain& domain, const PairPotential& phi, const Configuration& eta);

  std::size_t dimension() const noexcept { return dim_; }
  double cell_side() const noexcept { return side_; }
  std::size_t cell_count() const noexcept { return cells_.size(); }
  std::size_t cells_along(std::size_t axis) const noexcept { return static_cast<std::size_t>(extent_[axis]); }
  /// Total number of stored particles.
  std::size_t size() const noexcept { return size_; }

  /// Flat index of the cell containing p.
  std::size_t cell_of(const Point& p) const noexcept;
  std::span<const Entry> cell(std::size_t flat_index) const noexcept { return cells_[flat_index]; }

  void insert(ParticleId id, const Point& p);
  /// Throws ConsistencyError if `id` is not stored in the cell of `p`.
  void remove(ParticleId id, const Point& p);
  void clear() noexcept;

  /// Calls visit(entry) for each particle in the cell of x and its neighbours
  /// until visit returns false. Returns the number of cells inspected (<= 3^d).
  template <class Visitor>
  std::size_t visit_neighborhood(const Point& x, Visitor&& visit) const;

  /// True iff the grid holds exactly the particles of eta, each in its own cell.
  bool consistent_with(const Configuration& eta) const;

  /// Per-cell multiset equality.
  friend bool operator==(const SpatialGrid& a, const SpatialGrid& b);

 private:
  struct Offset {
    std::array<int, kMaxDimension> delta;
    std::ptrdiff_t flat;
  };

  std::array<int, kMaxDimension> coords_of(const Point& p) const noexcept;

  std::size_t dim_;
  double side_;
  std::array<int, kMaxDimension> extent_{};
  std::array<std::size_t, kMaxDimension> stride_{};
  std::vector<Offset> offsets_;
  std::vector<std::vector<Entry>> cells_;
  std::size_t size_ = 0;
};

template <class Visitor>
std::size_t SpatialGrid::visit_neighborhood(const Point& x, Visitor&& visit) const {
  const auto c = coords_of(x);
  std::size_t base = 0;
  for (std::size_t i = 0; i < dim_; ++i) base += static_cast<std::size_t>(c[i]) * stride_[i];

  std::size_t inspected = 0;
  for (const Offset& off : offsets_) {
    bool inside = true;
    for (std::size_t i = 0; i < dim_; ++i) {
      const int ci = c[i] + off.delta[i];
      if (ci < 0 || ci >= extent_[i]) {
        inside = false;
        break;
      }
    }
    if (!inside) continue;
    ++inspected;
    const auto& bucket = cells_[static_cast<std::size_t>(static_cast<std::ptrdiff_t>(base) + off.flat)];
    for (const Entry& e : bucket) {
      if (!visit(e)) return inspected;
    }
  }
  return inspected;
}

/// Energy change sum_{y in eta} phi(x, y) of adding x, scanning only the
/// neighbour cells of x. Stops at the first infinite contribution.
Energy delta_energy(const SpatialGrid& grid, const Point& x, const PairPotential& phi);

}  // namespace gibbs
