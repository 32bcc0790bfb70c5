#include "gibbs/spatial_grid.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "gibbs/errors.hpp"

namespace gibbs {

namespace {

constexpr std::size_t kMaxCells = std::size_t{1} << 26;

}  // namespace

SpatialGrid::SpatialGrid(const Domain& domain, double cell_side) : dim_(domain.dimension()), side_(cell_side) {
  if (!(cell_side > 0.0) || !std::isfinite(cell_side)) throw ParameterError("grid cell side must be positive");
  std::size_t total = 1;
  for (std::size_t i = 0; i < dim_; ++i) {
    const double n = std::max(1.0, std::ceil(domain.side(i) / cell_side));
    if (n > static_cast<double>(kMaxCells)) throw ParameterError("spatial grid too large for domain");
    extent_[i] = static_cast<int>(n);
    stride_[i] = total;
    total *= static_cast<std::size_t>(n);
    if (total > kMaxCells) throw ParameterError("spatial grid too large for domain");
  }
  cells_.resize(total);

  std::size_t n_offsets = 1;
  for (std::size_t i = 0; i < dim_; ++i) n_offsets *= 3;
  offsets_.reserve(n_offsets);
  for (std::size_t code = 0; code < n_offsets; ++code) {
    Offset off{};
    std::size_t rest = code;
    for (std::size_t i = 0; i < dim_; ++i) {
      off.delta[i] = static_cast<int>(rest % 3) - 1;
      rest /= 3;
      off.flat += static_cast<std::ptrdiff_t>(off.delta[i]) * static_cast<std::ptrdiff_t>(stride_[i]);
    }
    offsets_.push_back(off);
  }
  // Own cell first: most rejections are found there.
  std::stable_partition(offsets_.begin(), offsets_.end(), [](const Offset& o) { return o.flat == 0; });
}

SpatialGrid SpatialGrid::build(const Domain& domain, const PairPotential& phi, const Configuration& eta) {
  SpatialGrid grid = for_potential(domain, phi);
  for (const auto& p : eta.particles()) grid.insert(p.id, p.position);
  return grid;
}

std::array<int, kMaxDimension> SpatialGrid::coords_of(const Point& p) const noexcept {
  std::array<int, kMaxDimension> c{};
  for (std::size_t i = 0; i < dim_; ++i) {
    const double f = std::floor(p[i] / side_);
    c[i] = f <= 0.0 ? 0 : (f >= extent_[i] - 1 ? extent_[i] - 1 : static_cast<int>(f));
  }
  return c;
}

std::size_t SpatialGrid::cell_of(const Point& p) const noexcept {
  const auto c = coords_of(p);
  std::size_t flat = 0;
  for (std::size_t i = 0; i < dim_; ++i) flat += static_cast<std::size_t>(c[i]) * stride_[i];
  return flat;
}

void SpatialGrid::insert(ParticleId id, const Point& p) {
  cells_[cell_of(p)].push_back({id, p});
  ++size_;
}

void SpatialGrid::remove(ParticleId id, const Point& p) {
  auto& bucket = cells_[cell_of(p)];
  auto it = std::find_if(bucket.begin(), bucket.end(), [id](const Entry& e) { return e.id == id; });
  if (it == bucket.end()) {
    throw ConsistencyError("spatial grid: particle " + std::to_string(to_underlying(id)) + " not found in cell of " +
                           to_string(p));
  }
  *it = bucket.back();
  bucket.pop_back();
  --size_;
}

void SpatialGrid::clear() noexcept {
  for (auto& bucket : cells_) bucket.clear();
  size_ = 0;
}

bool SpatialGrid::consistent_with(const Configuration& eta) const {
  if (eta.size() != size_) return false;
  for (const auto& p : eta.particles()) {
    const auto& bucket = cells_[cell_of(p.position)];
    const bool found = std::any_of(bucket.begin(), bucket.end(),
                                   [&](const Entry& e) { return e.id == p.id && e.position == p.position; });
    if (!found) return false;
  }
  return true;
}

bool operator==(const SpatialGrid& a, const SpatialGrid& b) {
  if (a.dim_ != b.dim_ || a.side_ != b.side_ || a.extent_ != b.extent_ || a.size_ != b.size_) return false;
  for (std::size_t i = 0; i < a.cells_.size(); ++i) {
    std::vector<std::uint64_t> x, y;
    for (const auto& e : a.cells_[i]) x.push_back(to_underlying(e.id));
    for (const auto& e : b.cells_[i]) y.push_back(to_underlying(e.id));
    std::sort(x.begin(), x.end());
    std::sort(y.begin(), y.end());
    if (x != y) return false;
  }
  return true;
}

Energy delta_energy(const SpatialGrid& grid, const Point& x, const PairPotential& phi) {
  Energy total;
  grid.visit_neighborhood(x, [&](const SpatialGrid::Entry& e) {
    total += phi(x, e.position);
    return !total.is_infinite();
  });
  return total;
}

}  // namespace gibbs
