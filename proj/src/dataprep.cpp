#include "tibvp/dataprep.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>

#include "tibvp/errors.hpp"
#include "tibvp/operators.hpp"
#include "tibvp/stencil.hpp"

namespace tibvp {

void BumpParams::validate(const Domain& domain, const Grid& grid) const {
  if (!(a > 0.0) || !std::isfinite(a)) throw InvariantError("bump width must be positive");
  if (a < 2.0 * grid.max_spacing())
    throw InvariantError("bump width " + std::to_string(a) + " is below twice the grid spacing " +
                         std::to_string(grid.max_spacing()));
  if (2.0 * a >= domain.inradius())
    throw InvariantError("twice the bump width " + std::to_string(2.0 * a) + " reaches the inradius " +
                         std::to_string(domain.inradius()));
}

double bump_profile(double rho, double a) {
  if (rho >= 2.0 * a) return 1.0;
  if (rho <= a) return 0.0;
  const double s = 2.0 * a - rho;
  return std::exp(1.0 - a * a / (a * a - s * s));
}

double lift_profile(double rho, double a) {
  if (rho >= a) return 0.0;
  return std::exp(1.0 - a * a / (a * a - rho * rho));
}

double bump_at(const Domain& domain, double a, const Point& x) {
  const double sd = domain.signed_distance(x);
  if (!(sd < 0.0)) return 0.0;
  return bump_profile(-sd, a);
}

SpatialField bump(const Domain& domain, const BumpParams& params, const Grid& grid) {
  params.validate(domain, grid);
  return SpatialField::sample(grid, [&](const Point& x) { return bump_at(domain, params.a, x); });
}

SpatialField smooth_compact(const SpatialField::ScalarFn& fn, const Domain& domain, const BumpParams& params,
                            const Grid& grid, bool smooth) {
  params.validate(domain, grid);
  SpatialField out = SpatialField::sample(grid, [&](const Point& x) {
    const double g = bump_at(domain, params.a, x);
    return g == 0.0 ? 0.0 : fn(x) * g;
  });
  if (smooth) out = gaussian_smooth(out, 2.0 * grid.max_spacing());
  return out;
}

SpatialField smooth_compact(const Expression& expr, const Domain& domain, const BumpParams& params,
                            const Grid& grid, bool smooth) {
  return smooth_compact([&](const Point& x) { return expr.eval(x); }, domain, params, grid, smooth);
}

std::vector<double> BoundaryData::taylor(const Point& x, int m) const {
  std::vector<double> out(static_cast<std::size_t>(m) + 1, 0.0);
  if (!expr.empty()) {
    out = expr.taylor(x, m);
  } else {
    const std::size_t n = std::min(coefficients.size(), out.size());
    for (std::size_t k = 0; k < n; ++k) out[k] = coefficients[k].eval(x);
  }
  for (std::size_t k = 0; k < out.size(); ++k)
    if (!std::isfinite(out[k]))
      throw InvariantError("boundary data coefficient " + std::to_string(k) + " is not finite at (" +
                           std::to_string(x[0]) + ", " + std::to_string(x[1]) + ", " + std::to_string(x[2]) +
                           ")");
  return out;
}

bool BoundaryData::is_zero() const {
  if (!expr.empty()) return expr.is_zero();
  return std::all_of(coefficients.begin(), coefficients.end(), [](const Expression& e) { return e.is_zero(); });
}

bool BoundaryData::depends_on_t() const {
  if (!expr.empty()) return expr.depends_on_t();
  return coefficients.size() > 1;
}

namespace {

double distance(const Point& x, const Point& p, int dim) {
  double s = 0.0;
  for (int i = 0; i < dim; ++i) s += (x[i] - p[i]) * (x[i] - p[i]);
  return std::sqrt(s);
}

std::string point_text(const Point& p, int dim) {
  std::string s = "(";
  char buf[32];
  for (int i = 0; i < dim; ++i) {
    std::snprintf(buf, sizeof buf, "%.6g", p[i]);
    if (i) s += ", ";
    s += buf;
  }
  return s + ")";
}

SpatialField masked(SpatialField v) {
  v.apply_mask();
  return v;
}

bool all_zero(const TaylorField& w) {
  for (const auto& c : w.coefficients())
    if (c.max_abs() != 0.0) return false;
  return true;
}

}  // namespace

std::vector<double> boundary_lift_at(const BoundaryData& ub, const Domain& domain, double a, const Point& x, int m) {
  std::vector<double> out(static_cast<std::size_t>(m) + 1, 0.0);
  const double sd = domain.signed_distance(x);
  if (sd > 0.0 || std::isnan(sd)) return out;
  const Point p = sd == 0.0 ? x : domain.project_to_boundary(x);
  const double g = lift_profile(distance(x, p, domain.dim()), a);
  if (g == 0.0) return out;
  out = ub.taylor(p, m);
  for (double& v : out) v *= g;
  return out;
}

TaylorField boundary_lift(const BoundaryData& ub, const Domain& domain, double a, const Grid& grid, int m) {
  if (!(a > 0.0) || !std::isfinite(a)) throw InvariantError("lift width must be positive");
  if (m < 0) throw InvariantError("lift time order must be nonnegative");
  if (domain.dim() != grid.dim()) throw DimensionError("domain and grid dimensions differ");
  std::vector<SpatialField> coeffs(static_cast<std::size_t>(m) + 1, SpatialField(grid));
  if (ub.is_zero()) return TaylorField(std::move(coeffs));
  for (std::size_t idx = 0; idx < grid.size(); ++idx) {
    if (!grid.in_mask(idx)) continue;
    const Point x = grid.point(idx);
    if (domain.signed_distance(x) <= -a) continue;
    const auto w = boundary_lift_at(ub, domain, a, x, m);
    for (int k = 0; k <= m; ++k) coeffs[k](0, idx) = w[k];
  }
  return TaylorField(std::move(coeffs));
}

TaylorField boundary_lift_extended(const BoundaryData& ub, const Domain& domain, double a, const Grid& grid, int m) {
  TaylorField w = boundary_lift(ub, domain, a, grid, m);
  if (ub.is_zero()) return w;
  for (std::size_t idx = 0; idx < grid.size(); ++idx) {
    if (grid.in_mask(idx)) continue;
    const Point x = grid.point(idx);
    const double sd = domain.signed_distance(x);
    if (sd >= a) continue;
    const Point p = domain.nearest_boundary_point(x);
    const double g = lift_profile(distance(x, p, domain.dim()), a);
    if (g == 0.0) continue;
    const auto v = ub.taylor(p, m);
    for (int k = 0; k <= m; ++k) w[k](0, idx) = g * v[k];
  }
  return w;
}

void check_compatibility(const SpatialField::ScalarFn& u0, const BoundaryData& ub, const Domain& domain, double a,
                         const Grid& grid, double rel_tol) {
  double scale = 1.0, worst = -1.0;
  Point worst_p{};
  double worst_u0 = 0.0, worst_ub = 0.0;
  for (std::size_t idx = 0; idx < grid.size(); ++idx) {
    if (!grid.in_mask(idx)) continue;
    const Point x = grid.point(idx);
    const double sd = domain.signed_distance(x);
    if (!(sd < 0.0) || sd <= -a) continue;
    const Point p = domain.project_to_boundary(x);
    const double lhs = u0(p);
    const double rhs = ub.taylor(p, 0)[0];
    scale = std::max({scale, std::abs(lhs), std::abs(rhs)});
    const double gap = std::abs(lhs - rhs);
    if (!(gap <= worst)) {
      worst = gap;
      worst_p = p;
      worst_u0 = lhs;
      worst_ub = rhs;
    }
  }
  if (worst > rel_tol * scale) {
    char buf[160];
    std::snprintf(buf, sizeof buf, ": u0 = %.10g but u_b = %.10g (mismatch %.3g, tolerance %.3g)", worst_u0,
                  worst_ub, worst, rel_tol * scale);
    throw CompatibilityError("initial and boundary data disagree at boundary point " +
                             point_text(worst_p, domain.dim()) + buf);
  }
}

HomogenizedProblem homogenize(const SeriesOperator& op, int op_order, int time_order, const TaylorField& f,
                              const SpatialField& u0, const SpatialField& u1, const TaylorField& w) {
  if (time_order != 1 && time_order != 2) throw InvariantError("time order must be 1 or 2");
  HomogenizedProblem out;
  out.w = w;
  if (w.empty() || all_zero(w)) {
    out.f = f;
    out.u0 = u0;
    out.u1 = u1;
    return out;
  }
  require_same_grid(u0, w[0], "homogenize");
  // An extended lift carries values outside the mask; only the operator
  // should see them.
  std::vector<SpatialField> wm;
  for (const auto& c : w.coefficients()) wm.push_back(masked(c));
  out.w = TaylorField(wm);
  out.u0 = u0 - wm[0];
  if (time_order == 2) {
    out.u1 = u1;
    if (wm.size() > 1) out.u1 = u1 - wm[1];
  }

  const int W = static_cast<int>(w.size());
  const int K = std::max(static_cast<int>(f.size()), W + std::max(op_order, -1));
  std::vector<SpatialField> fc;
  fc.reserve(K);
  for (int k = 0; k < K; ++k) {
    SpatialField acc = k < static_cast<int>(f.size()) ? f[k] : SpatialField(u0.grid(), u0.components());
    const int kd = k + time_order;
    if (kd < W) {
      const double factor = time_order == 1 ? static_cast<double>(k + 1)
                                            : static_cast<double>(k + 2) * static_cast<double>(k + 1);
      acc.axpy(-factor, wm[kd]);
    }
    for (int j = 0; j <= std::min(k, op_order); ++j) {
      if (k - j >= W) continue;
      acc += op(j, w[k - j]);
    }
    fc.push_back(masked(std::move(acc)));
  }
  out.f = TaylorField(std::move(fc));
  return out;
}

HomogenizedProblem homogenize(const ParabolicScalarSpec& spec, const TaylorField& f, const SpatialField& u0,
                              const TaylorField& w) {
  return homogenize(series_operator(spec), spec.order(), 1, f, u0, SpatialField(), w);
}

HomogenizedProblem homogenize(const DivFormSystemSpec& spec, const TaylorField& f, const SpatialField& u0,
                              const TaylorField& w) {
  return homogenize(series_operator(spec), spec.order(), 1, f, u0, SpatialField(), w);
}

HomogenizedProblem homogenize_hyperbolic(const DivFormSystemSpec& spec, const TaylorField& f,
                                         const SpatialField& u0, const SpatialField& u1, const TaylorField& w) {
  return homogenize(series_operator(spec), spec.order(), 2, f, u0, u1, w);
}

TaylorField add_series(const TaylorField& a, const TaylorField& b) {
  if (a.empty()) return b;
  if (b.empty()) return a;
  const std::size_t n = std::max(a.size(), b.size());
  std::vector<SpatialField> out;
  out.reserve(n);
  for (std::size_t k = 0; k < n; ++k) {
    const SpatialField* x = a.find(k);
    const SpatialField* y = b.find(k);
    if (x && y)
      out.push_back(*x + *y);
    else
      out.push_back(x ? *x : *y);
  }
  return TaylorField(std::move(out));
}

TaylorField truncate_forcing(const TaylorField& f, int l) {
  if (l < 0) throw InvariantError("truncation order must be nonnegative");
  if (f.empty()) return f;
  if (l > f.order())
    throw InvariantError("truncation order " + std::to_string(l) + " exceeds the forcing order " +
                         std::to_string(f.order()));
  return truncate_series(f, l);
}

double truncation_tail_bound(const TaylorField& f, int l, double horizon) {
  double s = 0.0;
  for (std::size_t k = static_cast<std::size_t>(l) + 1; k < f.size(); ++k)
    s += f[k].max_abs() * std::pow(horizon, static_cast<double>(k));
  return s;
}

SpatialField divfree_data(const std::array<SpatialField::ScalarFn, 3>& potential, const Domain& domain,
                          const BumpParams& params, const Grid& grid) {
  if (grid.dim() != 3) throw DimensionError("divergence-free data needs a 3-D grid");
  SpatialField w(grid, 3);
  for (int c = 0; c < 3; ++c) w.set_component(c, smooth_compact(potential[c], domain, params, grid));
  return curl(w);
}

SpatialField divfree_data(const std::array<Expression, 3>& potential, const Domain& domain,
                          const BumpParams& params, const Grid& grid) {
  std::array<SpatialField::ScalarFn, 3> fns;
  for (int c = 0; c < 3; ++c) fns[c] = [&potential, c](const Point& x) { return potential[c].eval(x); };
  return divfree_data(fns, domain, params, grid);
}

}  // namespace tibvp
