#pragma once

#include <array>
#include <vector>

#include "tibvp/expression.hpp"
#include "tibvp/field.hpp"
#include "tibvp/geometry.hpp"
#include "tibvp/recurrence.hpp"
#include "tibvp/taylor.hpp"

namespace tibvp {

/// Transition width of the bump and of the boundary lift.
struct BumpParams {
  double a = 0.1;

  /// a >= 2 max spacing and 2a < inradius; throws InvariantError.
  void validate(const Domain& domain, const Grid& grid) const;
};

/// Bump value at a point whose inward distance to the boundary is rho:
/// 0 for rho <= a, 1 for rho >= 2a, exp(1 - a^2 / (a^2 - (2a - rho)^2)) between.
double bump_profile(double rho, double a);
/// Lift profile exp(1 - a^2 / (a^2 - rho^2)) for rho < a, else 0.
double lift_profile(double rho, double a);

double bump_at(const Domain& domain, double a, const Point& x);

SpatialField bump(const Domain& domain, const BumpParams& params, const Grid& grid);

/// fn times the bump, optionally followed by Gaussian smoothing of width
/// 2 max spacing.
SpatialField smooth_compact(const SpatialField::ScalarFn& fn, const Domain& domain, const BumpParams& params,
                            const Grid& grid, bool smooth = false);
SpatialField smooth_compact(const Expression& expr, const Domain& domain, const BumpParams& params,
                            const Grid& grid, bool smooth = false);

/// Boundary values u_b(x, t): either one expression in x and t, or a list of
/// normalized t-coefficients given as expressions in x. An empty value is
/// the zero function.
struct BoundaryData {
  Expression expr;
  std::vector<Expression> coefficients;

  /// Normalized t-coefficients 0..m at a boundary point.
  std::vector<double> taylor(const Point& x, int m) const;
  bool is_zero() const;
  bool depends_on_t() const;
};

/// Coefficients 0..m of the lift w at a point of the closed domain; zero
/// outside. On the boundary itself this is u_b's expansion.
std::vector<double> boundary_lift_at(const BoundaryData& ub, const Domain& domain, double a, const Point& x, int m);

/// w_k(x) = (u_b)_k(P x) * lift_profile(|x - P x|, a) on the masked grid.
TaylorField boundary_lift(const BoundaryData& ub, const Domain& domain, double a, const Grid& grid, int m);

/// boundary_lift plus the same formula at the out-of-mask nodes within
/// distance a outside the domain, with P the nearest boundary point. The
/// stencils read stored values at those nodes, so an operator applied to this
/// field sees the lift continue smoothly across the boundary (the profile is
/// even in the distance) instead of dropping to zero. Pass it to homogenize
/// when the forcing should approximate the continuous A w near the boundary.
TaylorField boundary_lift_extended(const BoundaryData& ub, const Domain& domain, double a, const Grid& grid, int m);

/// Compares u0 with u_b(., 0) at the projections of every masked grid point
/// within distance a of the boundary. Throws CompatibilityError naming the
/// worst sample when a mismatch exceeds rel_tol * scale, where scale is the
/// largest magnitude of either side over the samples (at least 1).
void check_compatibility(const SpatialField::ScalarFn& u0, const BoundaryData& ub, const Domain& domain,
                         double a, const Grid& grid, double rel_tol = 1e-8);

/// Problem with homogeneous boundary data; the solution of the original
/// problem is u = u_tilde + w.
struct HomogenizedProblem {
  TaylorField w;
  TaylorField f;
  SpatialField u0;
  SpatialField u1;  // empty for first-order problems
};

/// Generic transform for u' = L u + f (time_order 1) or u'' = L u + f
/// (time_order 2): u0 - w0, u1 - w1 and
///   f_k - (k+1) w_{k+1} + sum_j L_j w_{k-j}        (first order)
///   f_k - (k+2)(k+1) w_{k+2} + sum_j L_j w_{k-j}   (second order).
/// A lift that is identically zero returns the inputs unchanged. Values of w
/// outside the mask are seen only by the operator; every returned field,
/// including the stored w, is zero there.
HomogenizedProblem homogenize(const SeriesOperator& op, int op_order, int time_order, const TaylorField& f,
                              const SpatialField& u0, const SpatialField& u1, const TaylorField& w);
HomogenizedProblem homogenize(const ParabolicScalarSpec& spec, const TaylorField& f, const SpatialField& u0,
                              const TaylorField& w);
HomogenizedProblem homogenize(const DivFormSystemSpec& spec, const TaylorField& f, const SpatialField& u0,
                              const TaylorField& w);
HomogenizedProblem homogenize_hyperbolic(const DivFormSystemSpec& spec, const TaylorField& f,
                                         const SpatialField& u0, const SpatialField& u1, const TaylorField& w);

/// Coefficientwise sum of two series, padded to the longer one.
TaylorField add_series(const TaylorField& a, const TaylorField& b);

/// Coefficients 0..l of f.
TaylorField truncate_forcing(const TaylorField& f, int l);
/// sum_{k > l} ||phi_k||_inf T^k, the bound on what truncate_forcing drops.
double truncation_tail_bound(const TaylorField& f, int l, double horizon);

/// curl of the potential w with every component passed through smooth_compact.
SpatialField divfree_data(const std::array<Expression, 3>& potential, const Domain& domain,
                          const BumpParams& params, const Grid& grid);
SpatialField divfree_data(const std::array<SpatialField::ScalarFn, 3>& potential, const Domain& domain,
                          const BumpParams& params, const Grid& grid);

}  // namespace tibvp
