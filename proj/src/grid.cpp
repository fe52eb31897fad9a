#include "tibvp/grid.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "tibvp/errors.hpp"

namespace tibvp {

Grid::Grid(int dim, std::array<int, 3> counts, Point origin, Point spacing, int stencil_order)
    : dim_(dim), origin_(origin), spacing_(spacing), stencil_order_(stencil_order) {
  if (dim < 1 || dim > 3) throw DimensionError("grid dimension must be 1, 2 or 3");
  if (stencil_order != 2 && stencil_order != 4)
    throw InvariantError("stencil order must be 2 or 4");
  for (int a = 0; a < 3; ++a) {
    if (a < dim) {
      if (counts[a] < 5)
        throw InvariantError("grid axis " + std::to_string(a) + " needs at least 5 points");
      if (!(spacing[a] > 0.0))
        throw InvariantError("grid spacing on axis " + std::to_string(a) + " must be positive");
      counts_[a] = counts[a];
    } else {
      counts_[a] = 1;
      origin_[a] = 0.0;
      spacing_[a] = 1.0;
    }
  }
  strides_ = {1, static_cast<std::size_t>(counts_[0]),
              static_cast<std::size_t>(counts_[0]) * static_cast<std::size_t>(counts_[1])};
  size_ = strides_[2] * static_cast<std::size_t>(counts_[2]);
  mask_ = std::make_shared<const std::vector<std::uint8_t>>(size_, std::uint8_t{1});
}

Grid Grid::uniform(std::span<const double> lower, std::span<const double> upper,
                   std::span<const int> counts, int stencil_order) {
  const auto dim = lower.size();
  if (dim == 0 || dim > 3 || upper.size() != dim || counts.size() != dim)
    throw DimensionError("grid bounds and counts must have matching dimension 1..3");
  std::array<int, 3> n{1, 1, 1};
  Point origin{}, spacing{1.0, 1.0, 1.0};
  for (std::size_t a = 0; a < dim; ++a) {
    if (!(upper[a] > lower[a])) throw InvariantError("grid bounds must be strictly ordered");
    if (counts[a] < 5) throw InvariantError("grid axis needs at least 5 points");
    n[a] = counts[a];
    origin[a] = lower[a];
    spacing[a] = (upper[a] - lower[a]) / (counts[a] - 1);
  }
  return Grid(static_cast<int>(dim), n, origin, spacing, stencil_order);
}

double Grid::max_spacing() const noexcept {
  return *std::max_element(spacing_.begin(), spacing_.begin() + dim_);
}

double Grid::min_spacing() const noexcept {
  return *std::min_element(spacing_.begin(), spacing_.begin() + dim_);
}

std::array<int, 3> Grid::multi_index(std::size_t idx) const noexcept {
  const int k = static_cast<int>(idx / strides_[2]);
  idx -= k * strides_[2];
  const int j = static_cast<int>(idx / strides_[1]);
  const int i = static_cast<int>(idx - j * strides_[1]);
  return {i, j, k};
}

Point Grid::point(std::size_t idx) const noexcept {
  const auto m = multi_index(idx);
  Point p{0.0, 0.0, 0.0};
  for (int a = 0; a < dim_; ++a) p[a] = origin_[a] + m[a] * spacing_[a];
  return p;
}

double Grid::cell_volume() const noexcept {
  double v = 1.0;
  for (int a = 0; a < dim_; ++a) v *= spacing_[a];
  return v;
}

std::size_t Grid::mask_count() const noexcept {
  return static_cast<std::size_t>(std::count(mask_->begin(), mask_->end(), std::uint8_t{1}));
}

Grid Grid::with_mask(std::vector<std::uint8_t> mask) const {
  if (mask.size() != size_) throw DimensionError("mask size does not match grid");
  Grid g = *this;
  for (auto& m : mask) m = m ? 1 : 0;
  g.mask_ = std::make_shared<const std::vector<std::uint8_t>>(std::move(mask));
  return g;
}

Grid Grid::with_stencil_order(int order) const {
  if (order != 2 && order != 4) throw InvariantError("stencil order must be 2 or 4");
  Grid g = *this;
  g.stencil_order_ = order;
  return g;
}

bool Grid::compatible(const Grid& other) const noexcept {
  if (dim_ != other.dim_ || counts_ != other.counts_ || origin_ != other.origin_ ||
      spacing_ != other.spacing_ || stencil_order_ != other.stencil_order_)
    return false;
  if (mask_ == other.mask_) return true;
  if (!mask_ || !other.mask_) return false;
  return *mask_ == *other.mask_;
}

}  // namespace tibvp
