#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <vector>

namespace tibvp {

using Point = std::array<double, 3>;

/// Uniform tensor-product grid in 1, 2 or 3 dimensions with an interior mask.
///
/// Points are stored with x1 varying fastest. Unused axes have a single point.
/// The mask marks the points that belong to the open domain; fields vanish
/// everywhere else (extension by zero). A freshly constructed grid has every
/// point in the mask.
class Grid {
 public:
  Grid() = default;
  Grid(int dim, std::array<int, 3> counts, Point origin, Point spacing, int stencil_order = 4);

  /// Grid with `counts[i]` points spanning [lower[i], upper[i]] on each axis.
  static Grid uniform(std::span<const double> lower, std::span<const double> upper,
                      std::span<const int> counts, int stencil_order = 4);

  int dim() const noexcept { return dim_; }
  int count(int axis) const noexcept { return counts_[axis]; }
  double origin(int axis) const noexcept { return origin_[axis]; }
  double spacing(int axis) const noexcept { return spacing_[axis]; }
  double max_spacing() const noexcept;
  double min_spacing() const noexcept;
  /// Formal order (2 or 4) of the central difference stencils used on this grid.
  int stencil_order() const noexcept { return stencil_order_; }

  std::size_t size() const noexcept { return size_; }
  std::size_t stride(int axis) const noexcept { return strides_[axis]; }
  std::size_t index(int i, int j = 0, int k = 0) const noexcept {
    return static_cast<std::size_t>(i) + strides_[1] * j + strides_[2] * k;
  }
  std::array<int, 3> multi_index(std::size_t idx) const noexcept;
  Point point(std::size_t idx) const noexcept;
  /// Product of the spacings of the active axes.
  double cell_volume() const noexcept;

  bool in_mask(std::size_t idx) const noexcept { return (*mask_)[idx] != 0; }
  const std::vector<std::uint8_t>& mask() const noexcept { return *mask_; }
  std::size_t mask_count() const noexcept;

  Grid with_mask(std::vector<std::uint8_t> mask) const;
  Grid with_stencil_order(int order) const;

  /// Same geometry, stencil order and mask (by identity or by content).
  bool compatible(const Grid& other) const noexcept;

 private:
  int dim_ = 0;
  std::array<int, 3> counts_{1, 1, 1};
  Point origin_{0.0, 0.0, 0.0};
  Point spacing_{1.0, 1.0, 1.0};
  std::array<std::size_t, 3> strides_{1, 1, 1};
  std::size_t size_ = 0;
  int stencil_order_ = 4;
  std::shared_ptr<const std::vector<std::uint8_t>> mask_;
};

}  // namespace tibvp
