#pragma once

#include <cstdint>
#include <span>
#include <variant>
#include <vector>

#include "tibvp/grid.hpp"

namespace tibvp {

struct BoxDomain {
  std::vector<double> lower;
  std::vector<double> upper;
};

struct BallDomain {
  std::vector<double> center;
  double radius = 1.0;
};

/// Interior of sum_i ((x_i - center_i) / b_i)^2 < level^2, so the semi-axis
/// along i has length level * b_i.
struct EllipsoidDomain {
  std::vector<double> center;
  std::vector<double> b;
  double level = 1.0;
};

/// Intersection of the half-spaces normals[k] . x - offsets[k] < 0.
struct PolytopeDomain {
  std::vector<std::vector<double>> normals;
  std::vector<double> offsets;
};

/// A convex spatial domain in 1, 2 or 3 dimensions.
///
/// Construction validates the shape (ordered bounds, positive axes, bounded
/// polytope with a nonempty interior). All queries are const and thread-safe.
class Domain {
 public:
  using Shape = std::variant<BoxDomain, BallDomain, EllipsoidDomain, PolytopeDomain>;

  explicit Domain(Shape shape);

  static Domain box(std::vector<double> lower, std::vector<double> upper);
  static Domain ball(std::vector<double> center, double radius);
  static Domain ellipsoid(std::vector<double> center, std::vector<double> b, double level);
  static Domain polytope(std::vector<std::vector<double>> normals, std::vector<double> offsets);

  int dim() const noexcept { return dim_; }
  const Shape& shape() const noexcept { return shape_; }
  const char* kind() const noexcept;

  /// Negative inside, positive outside, zero on the boundary. Exact for boxes,
  /// balls and ellipsoids; for polytopes the largest face distance, which is
  /// exact inside.
  double signed_distance(std::span<const double> x) const;
  /// Nearest boundary point of an interior point. Equidistant faces resolve
  /// to the lowest face index.
  std::vector<double> project_to_boundary(std::span<const double> x) const;

  /// Same queries on the leading dim() entries of a grid point, without the
  /// dimension check.
  double signed_distance(const Point& p) const;
  Point project_to_boundary(const Point& p) const;
  /// Nearest point of the closed domain for an exterior point, and
  /// project_to_boundary for an interior one; either way a boundary point.
  Point nearest_boundary_point(const Point& p) const;

  /// Implicit boundary function: sum (x - c)^2 - r^2 for balls, the scaled
  /// quadratic for ellipsoids (both positive outside), and (-1)^m prod f_k for
  /// boxes and polytopes (positive inside).
  double level_function(std::span<const double> x) const;

  /// Radius of the largest inscribed ball.
  double inradius() const noexcept { return inradius_; }
  double diameter() const noexcept { return diameter_; }
  std::span<const double> bbox_lower() const noexcept { return {lower_.data(), static_cast<std::size_t>(dim_)}; }
  std::span<const double> bbox_upper() const noexcept { return {upper_.data(), static_cast<std::size_t>(dim_)}; }

 private:
  Shape shape_;
  int dim_ = 0;
  double inradius_ = 0.0;
  double diameter_ = 0.0;
  Point lower_{};
  Point upper_{};
};

/// 1 at grid points with negative signed distance, 0 elsewhere. The grid
/// bounding box must contain the domain.
std::vector<std::uint8_t> interior_mask(const Domain& domain, const Grid& grid);

/// The grid restricted to the domain interior.
Grid masked_grid(const Domain& domain, const Grid& grid);

}  // namespace tibvp
