#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "tibvp/grid.hpp"

namespace tibvp {

/// Values of a scalar or N-component function sampled on a grid.
///
/// Storage is component-major: component c occupies
/// values()[c * points() .. (c + 1) * points()). Values at points outside the
/// grid mask are kept at zero by every operation in the library.
class SpatialField {
 public:
  SpatialField() = default;
  explicit SpatialField(Grid grid, int components = 1);

  using ScalarFn = std::function<double(const Point&)>;
  using VectorFn = std::function<double(const Point&, int component)>;

  /// Samples fn at every masked-in point; other points are zero.
  static SpatialField sample(const Grid& grid, const ScalarFn& fn);
  static SpatialField sample(const Grid& grid, int components, const VectorFn& fn);

  const Grid& grid() const noexcept { return grid_; }
  int components() const noexcept { return components_; }
  std::size_t points() const noexcept { return grid_.size(); }
  bool empty() const noexcept { return components_ == 0; }

  std::span<double> values() noexcept { return values_; }
  std::span<const double> values() const noexcept { return values_; }
  std::span<double> component(int c) noexcept {
    return std::span<double>(values_).subspan(c * points(), points());
  }
  std::span<const double> component(int c) const noexcept {
    return std::span<const double>(values_).subspan(c * points(), points());
  }
  double& operator()(int c, std::size_t idx) noexcept { return values_[c * points() + idx]; }
  double operator()(int c, std::size_t idx) const noexcept { return values_[c * points() + idx]; }

  /// Copy of a single component as a scalar field.
  SpatialField component_field(int c) const;
  void set_component(int c, const SpatialField& scalar);

  SpatialField& operator+=(const SpatialField& other);
  SpatialField& operator-=(const SpatialField& other);
  SpatialField& operator*=(double s);
  SpatialField& operator/=(double s);
  /// this += a * x
  void axpy(double a, const SpatialField& x);
  /// Zeroes every value outside the grid mask.
  void apply_mask();

  double max_abs() const noexcept;
  bool all_finite() const noexcept;
  /// Same grid (see Grid::compatible) and component count.
  bool same_shape(const SpatialField& other) const noexcept;

 private:
  Grid grid_;
  int components_ = 0;
  std::vector<double> values_;
};

SpatialField operator+(SpatialField a, const SpatialField& b);
SpatialField operator-(SpatialField a, const SpatialField& b);
SpatialField operator*(double s, SpatialField a);
SpatialField operator-(SpatialField a);

/// Pointwise product. `scalar` has one component and multiplies every
/// component of `field`, or both have the same component count.
SpatialField multiply(const SpatialField& scalar, const SpatialField& field);
/// Adds scalar * field pointwise into out.
void multiply_add(const SpatialField& scalar, const SpatialField& field, SpatialField& out);

/// Throws DimensionError when the two fields cannot be combined pointwise.
void require_same_grid(const SpatialField& a, const SpatialField& b, const char* where);

}  // namespace tibvp
