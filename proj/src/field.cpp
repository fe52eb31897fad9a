#include "tibvp/field.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "tibvp/errors.hpp"

namespace tibvp {

SpatialField::SpatialField(Grid grid, int components)
    : grid_(std::move(grid)), components_(components) {
  if (components < 1) throw DimensionError("a field needs at least one component");
  values_.assign(static_cast<std::size_t>(components) * grid_.size(), 0.0);
}

SpatialField SpatialField::sample(const Grid& grid, const ScalarFn& fn) {
  SpatialField f(grid, 1);
  for (std::size_t i = 0; i < grid.size(); ++i)
    if (grid.in_mask(i)) f.values_[i] = fn(grid.point(i));
  return f;
}

SpatialField SpatialField::sample(const Grid& grid, int components, const VectorFn& fn) {
  SpatialField f(grid, components);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!grid.in_mask(i)) continue;
    const Point p = grid.point(i);
    for (int c = 0; c < components; ++c) f(c, i) = fn(p, c);
  }
  return f;
}

SpatialField SpatialField::component_field(int c) const {
  SpatialField out(grid_, 1);
  const auto src = component(c);
  std::copy(src.begin(), src.end(), out.values_.begin());
  return out;
}

void SpatialField::set_component(int c, const SpatialField& scalar) {
  if (scalar.components() != 1 || !grid_.compatible(scalar.grid()))
    throw DimensionError("set_component needs a scalar field on the same grid");
  const auto src = scalar.component(0);
  std::copy(src.begin(), src.end(), component(c).begin());
}

void require_same_grid(const SpatialField& a, const SpatialField& b, const char* where) {
  if (!a.grid().compatible(b.grid()))
    throw DimensionError(std::string(where) + ": fields live on incompatible grids");
}

bool SpatialField::same_shape(const SpatialField& other) const noexcept {
  return components_ == other.components_ && grid_.compatible(other.grid_);
}

SpatialField& SpatialField::operator+=(const SpatialField& other) {
  if (!same_shape(other)) throw DimensionError("field addition: shape mismatch");
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += other.values_[i];
  return *this;
}

SpatialField& SpatialField::operator-=(const SpatialField& other) {
  if (!same_shape(other)) throw DimensionError("field subtraction: shape mismatch");
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] -= other.values_[i];
  return *this;
}

SpatialField& SpatialField::operator*=(double s) {
  for (auto& v : values_) v *= s;
  return *this;
}

SpatialField& SpatialField::operator/=(double s) {
  for (auto& v : values_) v /= s;
  return *this;
}

void SpatialField::axpy(double a, const SpatialField& x) {
  if (!same_shape(x)) throw DimensionError("axpy: shape mismatch");
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += a * x.values_[i];
}

void SpatialField::apply_mask() {
  const auto& mask = grid_.mask();
  const std::size_t n = points();
  for (int c = 0; c < components_; ++c)
    for (std::size_t i = 0; i < n; ++i)
      if (!mask[i]) values_[c * n + i] = 0.0;
}

double SpatialField::max_abs() const noexcept {
  double m = 0.0;
  for (double v : values_) m = std::max(m, std::abs(v));
  return m;
}

bool SpatialField::all_finite() const noexcept {
  return std::all_of(values_.begin(), values_.end(), [](double v) { return std::isfinite(v); });
}

SpatialField operator+(SpatialField a, const SpatialField& b) { return a += b; }
SpatialField operator-(SpatialField a, const SpatialField& b) { return a -= b; }
SpatialField operator*(double s, SpatialField a) { return a *= s; }
SpatialField operator-(SpatialField a) {
  for (auto& v : a.values()) v = -v;
  return a;
}

SpatialField multiply(const SpatialField& scalar, const SpatialField& field) {
  SpatialField out(field.grid(), field.components());
  multiply_add(scalar, field, out);
  return out;
}

void multiply_add(const SpatialField& scalar, const SpatialField& field, SpatialField& out) {
  require_same_grid(scalar, field, "multiply");
  if (!out.same_shape(field)) throw DimensionError("multiply_add: output shape mismatch");
  const std::size_t n = field.points();
  if (scalar.components() == 1) {
    const auto s = scalar.component(0);
    for (int c = 0; c < field.components(); ++c) {
      const auto f = field.component(c);
      auto o = out.component(c);
      for (std::size_t i = 0; i < n; ++i) o[i] += s[i] * f[i];
    }
  } else if (scalar.components() == field.components()) {
    const auto s = scalar.values();
    const auto f = field.values();
    auto o = out.values();
    for (std::size_t i = 0; i < f.size(); ++i) o[i] += s[i] * f[i];
  } else {
    throw DimensionError("multiply: component counts are incompatible");
  }
}

}  // namespace tibvp
