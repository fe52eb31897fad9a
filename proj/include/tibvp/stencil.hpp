#pragma once

#include "tibvp/field.hpp"

namespace tibvp {

/// Central difference d/dx_axis (order 1) or d^2/dx_axis^2 (order 2) of every
/// component, at the grid's stencil order (2 or 4).
///
/// Stencils read zeros outside the mask. A fourth-order stencil whose support
/// leaves the mask falls back to the second-order one at that point. The
/// output is masked like the input.
SpatialField diff(const SpatialField& field, int axis, int order);

/// d^2/dx_i dx_j as diff(diff(., min, 1), max, 1); (i, j) and (j, i) give
/// bitwise identical results.
SpatialField mixed_diff(const SpatialField& field, int i, int j);

/// Conservative second derivative d/dx_axis (coef * d/dx_axis u) built from
/// staggered differences: coef is interpolated to half points, multiplied by
/// the half-point derivative of u, and differenced back. With coef = 1 and
/// second-order stencils this is the three-point Laplacian stencil.
SpatialField conservative_second(const SpatialField& coef, const SpatialField& u, int axis);

struct FieldNorms {
  double linf = 0.0;
  double l2 = 0.0;
  double h1_seminorm = 0.0;
};

/// L-infinity, discrete L2 (sum v^2 * cell volume over masked points) and the
/// H1 seminorm built from first-order diff.
FieldNorms norms(const SpatialField& field);

/// Separable Gaussian smoothing with standard deviation `width`, truncated at
/// three widths and renormalized over masked points.
SpatialField gaussian_smooth(const SpatialField& field, double width);

/// Row-sum bound of the first- and second-derivative stencils on an axis.
double first_derivative_bound(const Grid& grid, int axis);
double second_derivative_bound(const Grid& grid, int axis);
double conservative_second_bound(const Grid& grid, int axis);

}  // namespace tibvp
