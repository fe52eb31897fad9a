#include "tibvp/recurrence.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "tibvp/errors.hpp"
#include "tibvp/stencil.hpp"

namespace tibvp {

TruncationPolicy TruncationPolicy::fixed(int order, double horizon) {
  TruncationPolicy p;
  p.mode = Mode::fixed;
  p.order = order;
  p.horizon = horizon;
  return p;
}

TruncationPolicy TruncationPolicy::adaptive(double tolerance, double horizon, int max_order) {
  TruncationPolicy p;
  p.mode = Mode::adaptive;
  p.tolerance = tolerance;
  p.horizon = horizon;
  p.max_order = max_order;
  return p;
}

void TruncationPolicy::validate() const {
  if (mode == Mode::fixed && order < 1) throw InvariantError("truncation: fixed order must be at least 1");
  if (mode == Mode::adaptive && !(tolerance > 0.0)) throw InvariantError("truncation: tolerance must be positive");
  if (max_order < 1 || max_order > 400) throw InvariantError("truncation: max order must lie in [1, 400]");
  if (mode == Mode::fixed && order > max_order) throw InvariantError("truncation: fixed order exceeds max order");
}

namespace {

constexpr int kGrowthStart = 20;
constexpr int kGrowthRun = 10;

using Bracket = std::function<SpatialField(int k, const std::vector<SpatialField>& c)>;

void check_forcing(const TaylorField& f, const SpatialField& u0, const char* what) {
  if (f.empty()) return;
  if (f.components() != u0.components() || !f.grid().compatible(u0.grid()))
    throw DimensionError(std::string(what) + ": forcing and initial data differ in shape");
}

// Runs c_k = bracket(k, c) / weight(k) from the given leading coefficients.
TaylorField run(std::vector<SpatialField> c, int time_order, const Bracket& bracket, const TruncationPolicy& policy,
                int min_order, const char* what, RecurrenceInfo* info) {
  policy.validate();
  for (const auto& ck : c)
    if (!ck.all_finite()) throw BlowUpError(std::string(what) + ": initial data are not finite", -1);

  const bool adaptive = policy.mode == TruncationPolicy::Mode::adaptive;
  const int target = adaptive ? policy.max_order : policy.order;
  const double T = policy.horizon;
  if (static_cast<int>(c.size()) > target + 1) c.resize(target + 1);

  double prev_w = -1.0;
  int growth = 0;
  bool converged = !adaptive;
  auto weight = [&](int k) { return T > 0.0 ? std::pow(T, k) : 1.0; };

  for (int k = static_cast<int>(c.size()); k <= target; ++k) {
    SpatialField ck = bracket(k, c);
    ck /= time_order == 1 ? static_cast<double>(k) : static_cast<double>(k) * (k - 1);
    if (!ck.all_finite())
      throw BlowUpError(std::string(what) + ": non-finite coefficient at order " + std::to_string(k), k - 1);
    const double norm_k = ck.max_abs();
    c.push_back(std::move(ck));

    if (T > 0.0) {
      const double w = norm_k * weight(k);
      if (k > kGrowthStart && prev_w >= 0.0 && w > prev_w)
        ++growth;
      else
        growth = 0;
      prev_w = w;
      if (growth >= kGrowthRun)
        throw BlowUpError(std::string(what) + ": coefficients keep growing past order " + std::to_string(k) +
                              " (||c_k|| T^k = " + std::to_string(w) + ")",
                          k - kGrowthRun);
    }
    if (adaptive && k >= min_order && k >= 1) {
      const double tail = norm_k * weight(k) + c[k - 1].max_abs() * weight(k - 1);
      if (tail < policy.tolerance) {
        converged = true;
        break;
      }
    }
  }
  if (info) {
    info->order_used = static_cast<int>(c.size()) - 1;
    info->converged = converged;
  }
  return TaylorField(std::move(c));
}

// sum_{j=0}^{min(top, op_order)} L_j c_{top-j}
SpatialField op_sum(const SeriesOperator& op, int op_order, const std::vector<SpatialField>& c, int top) {
  SpatialField acc = op(0, c[top]);
  const int last = std::min(top, op_order);
  for (int j = 1; j <= last; ++j) acc += op(j, c[top - j]);
  return acc;
}

SpatialField stack(const SpatialField& d, const SpatialField& b) {
  SpatialField out(d.grid(), 6);
  for (int c = 0; c < 3; ++c) {
    out.set_component(c, d.component_field(c));
    out.set_component(c + 3, b.component_field(c));
  }
  return out;
}

SpatialField half(const SpatialField& s, int which) {
  SpatialField out(s.grid(), 3);
  for (int c = 0; c < 3; ++c) out.set_component(c, s.component_field(c + 3 * which));
  return out;
}

}  // namespace

SeriesOperator series_operator(const ParabolicScalarSpec& spec) {
  return [&spec](int j, const SpatialField& u) { return apply_A(spec, j, u); };
}

SeriesOperator series_operator(const DivFormSystemSpec& spec) {
  return [&spec](int j, const SpatialField& u) { return apply_B(spec, j, u); };
}

TaylorField first_order_coeffs(const SeriesOperator& op, int op_order, const TaylorField& f, const SpatialField& u0,
                               const TruncationPolicy& policy, RecurrenceInfo* info) {
  check_forcing(f, u0, "first_order_coeffs");
  auto bracket = [&](int k, const std::vector<SpatialField>& c) {
    SpatialField acc = op_sum(op, op_order, c, k - 1);
    if (const SpatialField* phi = f.find(k - 1)) acc += *phi;
    return acc;
  };
  return run({u0}, 1, bracket, policy, static_cast<int>(f.size()), "first-order recurrence", info);
}

TaylorField second_order_coeffs(const SeriesOperator& op, int op_order, const TaylorField& f, const SpatialField& u0,
                                const SpatialField& u1, const TruncationPolicy& policy, RecurrenceInfo* info) {
  check_forcing(f, u0, "second_order_coeffs");
  if (!u0.same_shape(u1)) throw DimensionError("second_order_coeffs: u0 and u1 differ in shape");
  auto bracket = [&](int k, const std::vector<SpatialField>& c) {
    SpatialField acc = op_sum(op, op_order, c, k - 2);
    if (const SpatialField* phi = f.find(k - 2)) acc += *phi;
    return acc;
  };
  return run({u0, u1}, 2, bracket, policy, static_cast<int>(f.size()) + 1, "second-order recurrence", info);
}

TaylorField parabolic_coeffs(const ParabolicScalarSpec& spec, const TaylorField& f, const SpatialField& u0,
                             const TruncationPolicy& policy, RecurrenceInfo* info) {
  return first_order_coeffs(series_operator(spec), spec.order(), f, u0, policy, info);
}

TaylorField system_parabolic_coeffs(const DivFormSystemSpec& spec, const TaylorField& f, const SpatialField& u0,
                                    const TruncationPolicy& policy, RecurrenceInfo* info) {
  if (u0.components() != spec.components) throw DimensionError("system_parabolic_coeffs: u0 has the wrong component count");
  return first_order_coeffs(series_operator(spec), spec.order(), f, u0, policy, info);
}

TaylorField nonlinear_parabolic_coeffs(const ParabolicScalarSpec& pspec, const NonlinearTermsSpec& nspec,
                                       const TaylorField& f, const SpatialField& u0, const TruncationPolicy& policy,
                                       RecurrenceInfo* info) {
  validate(nspec, pspec.dim());
  check_forcing(f, u0, "nonlinear_parabolic_coeffs");
  const auto op = series_operator(pspec);
  const int op_order = pspec.order();
  const int n = pspec.dim();
  std::vector<std::vector<SpatialField>> du(n);

  auto bracket = [&](int k, const std::vector<SpatialField>& c) {
    SpatialField acc = op_sum(op, op_order, c, k - 1);
    if (nspec.lambda != 0.0) {
      // M at order k-1 needs c_0 .. c_{k-1}; derivatives are cached.
      for (int i = 0; i < n; ++i)
        while (static_cast<int>(du[i].size()) < k) du[i].push_back(diff(c[du[i].size()], i, 1));
      acc.axpy(-nspec.lambda, nonlinear_coefficient(nspec, c, du, k - 1));
    }
    if (const SpatialField* phi = f.find(k - 1)) acc += *phi;
    return acc;
  };
  return run({u0}, 1, bracket, policy, static_cast<int>(f.size()), "nonlinear recurrence", info);
}

TaylorField hyperbolic_coeffs(const DivFormSystemSpec& spec, const TaylorField& f, const SpatialField& u0,
                              const SpatialField& u1, const TruncationPolicy& policy, RecurrenceInfo* info) {
  if (u0.components() != spec.components) throw DimensionError("hyperbolic_coeffs: u0 has the wrong component count");
  return second_order_coeffs(series_operator(spec), spec.order(), f, u0, u1, policy, info);
}

TaylorField plate_coeffs(const PlateSpec& spec, const TaylorField& f, const SpatialField& u0, const SpatialField& u1,
                         const TruncationPolicy& policy, RecurrenceInfo* info) {
  if (u0.grid().dim() != 2) throw DimensionError("plate_coeffs: needs a 2-D grid");
  check_forcing(f, u0, "plate_coeffs");
  if (!u0.same_shape(u1) || u0.components() != 1) throw DimensionError("plate_coeffs: u0 and u1 must be scalar fields");
  SpatialField inv_rho_h(spec.grid, 1);
  for (std::size_t p = 0; p < spec.grid.size(); ++p)
    if (spec.grid.in_mask(p)) inv_rho_h(0, p) = spec.inv_rho_h[p];
  const bool cubic = spec.alpha1.max_abs() != 0.0;

  // s_j = (j+1) c_{j+1} is the velocity series; p = s s and q = p s.
  std::vector<SpatialField> s, p, q;
  auto bracket = [&](int k, const std::vector<SpatialField>& c) {
    SpatialField acc(u0.grid(), 1);
    acc -= multiply(inv_rho_h, apply_plate_A(spec, c[k - 2]));
    if (const SpatialField* phi = f.find(k - 2)) acc += *phi;
    acc -= static_cast<double>(k - 1) * multiply(spec.alpha0, c[k - 1]);
    if (cubic) {
      const int j = k - 2;
      while (static_cast<int>(s.size()) <= j) {
        const int i = static_cast<int>(s.size());
        s.push_back(static_cast<double>(i + 1) * c[i + 1]);
      }
      while (static_cast<int>(p.size()) <= j) {
        const int i = static_cast<int>(p.size());
        SpatialField v(u0.grid(), 1);
        for (int a = 0; a <= i; ++a) multiply_add(s[a], s[i - a], v);
        p.push_back(std::move(v));
      }
      while (static_cast<int>(q.size()) <= j) {
        const int i = static_cast<int>(q.size());
        SpatialField v(u0.grid(), 1);
        for (int a = 0; a <= i; ++a) multiply_add(p[a], s[i - a], v);
        q.push_back(std::move(v));
      }
      acc -= multiply(spec.alpha1, q[j]);
    }
    return acc;
  };
  return run({u0, u1}, 2, bracket, policy, static_cast<int>(f.size()) + 1, "plate recurrence", info);
}

MaxwellSeries maxwell_coeffs(const MaxwellSpec& spec, const TaylorField& g1, const TaylorField& g2,
                             const SpatialField& D0, const SpatialField& B0, const TruncationPolicy& policy,
                             RecurrenceInfo* info) {
  if (D0.components() != 3 || B0.components() != 3 || D0.grid().dim() != 3)
    throw DimensionError("maxwell_coeffs: D0 and B0 must be 3-vector fields on a 3-D grid");
  check_forcing(g1, D0, "maxwell_coeffs");
  check_forcing(g2, B0, "maxwell_coeffs");
  const SpatialField damping = multiply(spec.sigma, spec.xi_hat);

  auto bracket = [&](int k, const std::vector<SpatialField>& c) {
    const SpatialField d = half(c[k - 1], 0);
    const SpatialField b = half(c[k - 1], 1);
    SpatialField dk = curl(multiply(spec.mu_hat, b));
    dk -= multiply(damping, d);
    if (const SpatialField* g = g1.find(k - 1)) dk += *g;
    SpatialField bk = -curl(multiply(spec.xi_hat, d));
    if (const SpatialField* g = g2.find(k - 1)) bk += *g;
    return stack(dk, bk);
  };
  const int min_order = static_cast<int>(std::max(g1.size(), g2.size()));
  const TaylorField both = run({stack(D0, B0)}, 1, bracket, policy, min_order, "maxwell recurrence", info);
  MaxwellSeries out;
  for (const auto& c : both.coefficients()) {
    out.d.push_back(half(c, 0));
    out.b.push_back(half(c, 1));
  }
  return out;
}

TaylorField manufacture_rhs(const SeriesOperator& op, int op_order, const TaylorField& u, int time_order) {
  if (time_order != 1 && time_order != 2) throw InvariantError("manufacture_rhs: time order must be 1 or 2");
  if (static_cast<int>(u.size()) < time_order + 1)
    throw DimensionError("manufacture_rhs: u needs at least " + std::to_string(time_order + 1) + " coefficients");
  std::vector<SpatialField> shadow(u.coefficients().begin(), u.coefficients().begin() + time_order);
  std::vector<SpatialField> phi;
  for (int k = time_order; k <= u.order(); ++k) {
    const double w = time_order == 1 ? static_cast<double>(k) : static_cast<double>(k) * (k - 1);
    SpatialField sum = op_sum(op, op_order, shadow, k - time_order);
    SpatialField p = w * u[k];
    p -= sum;
    // Replay the forward step so later orders see exactly what it will see.
    sum += p;
    sum /= w;
    shadow.push_back(std::move(sum));
    phi.push_back(std::move(p));
  }
  return TaylorField(std::move(phi));
}

TaylorField manufacture_rhs(const ParabolicScalarSpec& spec, const TaylorField& u) {
  return manufacture_rhs(series_operator(spec), spec.order(), u, 1);
}

TaylorField manufacture_rhs(const DivFormSystemSpec& spec, const TaylorField& u, bool hyperbolic) {
  return manufacture_rhs(series_operator(spec), spec.order(), u, hyperbolic ? 2 : 1);
}

ResidualReport residual_check(const SeriesOperator& op, int op_order, const TaylorField& u, const TaylorField& f,
                              const std::vector<double>& sample_times, int time_order) {
  ResidualReport rep;
  if (static_cast<int>(u.size()) < time_order + 1) return rep;
  std::vector<SpatialField> r;
  for (int k = 0; k + time_order <= u.order(); ++k) {
    const int top = k + time_order;
    const double w = time_order == 1 ? static_cast<double>(top) : static_cast<double>(top) * (top - 1);
    const SpatialField lead = w * u[top];
    const SpatialField sum = op_sum(op, op_order, u.coefficients(), k);
    SpatialField rk = lead - sum;
    double scale = std::max(lead.max_abs(), sum.max_abs());
    if (const SpatialField* phi = f.find(k)) {
      rk -= *phi;
      scale = std::max(scale, phi->max_abs());
    }
    rep.coefficient_max = std::max(rep.coefficient_max, rk.max_abs());
    rep.coefficient_scale = std::max(rep.coefficient_scale, scale);
    r.push_back(std::move(rk));
  }
  const TaylorField R(std::move(r));
  for (double t : sample_times) {
    const double v = series_eval(R, t).max_abs();
    rep.time_residual.push_back(v);
    rep.time_max = std::max(rep.time_max, v);
  }
  return rep;
}

ResidualReport residual_check(const ParabolicScalarSpec& spec, const TaylorField& u, const TaylorField& f,
                              const std::vector<double>& sample_times) {
  return residual_check(series_operator(spec), spec.order(), u, f, sample_times, 1);
}

ResidualReport residual_check(const DivFormSystemSpec& spec, const TaylorField& u, const TaylorField& f,
                              const std::vector<double>& sample_times, bool hyperbolic) {
  return residual_check(series_operator(spec), spec.order(), u, f, sample_times, hyperbolic ? 2 : 1);
}

namespace {

// Slope of the least-squares line through (k, log n_k) for nonzero n_k with
// k in [lo, hi]; false when fewer than two points qualify.
bool fit_slope(const std::vector<double>& norms, int lo, int hi, double& slope) {
  double sk = 0.0, sy = 0.0, skk = 0.0, sky = 0.0;
  int cnt = 0;
  for (int k = std::max(lo, 1); k <= hi; ++k) {
    const double v = norms[k];
    if (!(v > 0.0) || !std::isfinite(v)) continue;
    const double y = std::log(v);
    sk += k;
    sy += y;
    skk += static_cast<double>(k) * k;
    sky += k * y;
    ++cnt;
  }
  if (cnt < 2) return false;
  const double den = cnt * skk - sk * sk;
  if (den == 0.0) return false;
  slope = (cnt * sky - sk * sy) / den;
  return true;
}

}  // namespace

RadiusEstimate radius_estimate(const TaylorField& u) {
  RadiusEstimate est;
  if (u.size() < 6) {
    est.note = "fewer than 6 coefficients";
    return est;
  }
  const auto norms = u.coefficient_norms();
  const int m = u.order();
  bool any = false;
  for (int k = 1; k <= m; ++k) any = any || norms[k] > 0.0;
  if (!any) {
    est.note = "coefficients vanish past order 0";
    est.radius = std::numeric_limits<double>::infinity();
    return est;
  }
  double late = 0.0;
  if (!fit_slope(norms, (m + 1) / 2, m, late)) {
    est.note = "too few nonzero coefficients in the fit window";
    return est;
  }
  est.determinate = true;
  est.radius = std::exp(-late);
  double early = 0.0;
  if (fit_slope(norms, std::max(1, m / 4), m / 2, early)) {
    const double r0 = std::exp(-early);
    if (est.radius > 1.25 * r0) {
      est.super_geometric = true;
      est.note = "super-geometric decay";
    }
  }
  return est;
}

std::size_t PiecewiseSeries::piece_for(double t) const {
  if (pieces.empty()) throw DimensionError("piecewise series is empty");
  const auto it = std::upper_bound(starts.begin(), starts.end(), t);
  if (it == starts.begin()) return 0;
  return static_cast<std::size_t>(it - starts.begin()) - 1;
}

SpatialField PiecewiseSeries::eval(double t) const {
  const std::size_t i = piece_for(t);
  return series_eval(pieces[i], t - starts[i]);
}

SpatialField PiecewiseSeries::eval_derivative(double t) const {
  const std::size_t i = piece_for(t);
  return series_eval_derivative(pieces[i], t - starts[i]);
}

int PiecewiseSeries::max_order() const {
  int m = -1;
  for (const auto& p : pieces) m = std::max(m, p.order());
  return m;
}

const TaylorField& PiecewiseSeries::single() const {
  if (pieces.size() != 1) throw DimensionError("piecewise series has more than one piece");
  return pieces.front();
}

namespace {

// Splits [0, T] into equal steps no longer than max_step and calls
// solve(t0, length, piece_policy) for each.
template <class Solve>
PiecewiseSeries march(const TruncationPolicy& policy, const ContinuationPolicy& cont, double max_step, MarchInfo* info,
                      Solve&& solve) {
  const double T = policy.horizon;
  if (!(T > 0.0)) throw InvariantError("continuation: horizon must be positive");
  int steps = 1;
  if (cont.enabled && max_step > 0.0 && std::isfinite(max_step) && max_step < T) {
    const double n = std::ceil(T / max_step);
    if (n > cont.max_steps) throw InvariantError("continuation: step count exceeds max_steps");
    steps = static_cast<int>(n);
  }
  PiecewiseSeries out;
  MarchInfo mi;
  mi.steps = steps;
  mi.step = T / steps;
  for (int i = 0; i < steps; ++i) {
    const double t0 = T * i / steps;
    const double len = i + 1 == steps ? T - t0 : T * (i + 1) / steps - t0;
    TruncationPolicy local = policy;
    local.horizon = len;
    RecurrenceInfo ri;
    out.pieces.push_back(solve(t0, local, &ri));
    out.starts.push_back(t0);
    out.lengths.push_back(len);
    mi.max_order_used = std::max(mi.max_order_used, ri.order_used);
    mi.converged = mi.converged && ri.converged;
  }
  if (info) *info = mi;
  return out;
}

TaylorField shifted_or_empty(const TaylorField& f, double t0) {
  return f.empty() || t0 == 0.0 ? f : shift_series(f, t0);
}

}  // namespace

PiecewiseSeries march_parabolic(const ParabolicScalarSpec& spec, const TaylorField& f, const SpatialField& u0,
                                const TruncationPolicy& policy, const ContinuationPolicy& cont, MarchInfo* info) {
  const double rho = spectral_bound(spec, policy.horizon);
  SpatialField state = u0;
  return march(policy, cont, cont.step_fraction / rho, info, [&](double t0, const TruncationPolicy& local, RecurrenceInfo* ri) {
    const ParabolicScalarSpec s = t0 == 0.0 ? spec : shift_spec(spec, t0);
    TaylorField piece = parabolic_coeffs(s, shifted_or_empty(f, t0), state, local, ri);
    state = series_eval(piece, local.horizon);
    return piece;
  });
}

PiecewiseSeries march_system_parabolic(const DivFormSystemSpec& spec, const TaylorField& f, const SpatialField& u0,
                                       const TruncationPolicy& policy, const ContinuationPolicy& cont,
                                       MarchInfo* info) {
  const double rho = spectral_bound(spec, policy.horizon);
  SpatialField state = u0;
  return march(policy, cont, cont.step_fraction / rho, info, [&](double t0, const TruncationPolicy& local, RecurrenceInfo* ri) {
    const DivFormSystemSpec s = t0 == 0.0 ? spec : shift_spec(spec, t0);
    TaylorField piece = system_parabolic_coeffs(s, shifted_or_empty(f, t0), state, local, ri);
    state = series_eval(piece, local.horizon);
    return piece;
  });
}

PiecewiseSeries march_nonlinear_parabolic(const ParabolicScalarSpec& pspec, const NonlinearTermsSpec& nspec,
                                          const TaylorField& f, const SpatialField& u0,
                                          const TruncationPolicy& policy, const ContinuationPolicy& cont,
                                          MarchInfo* info) {
  const int n = pspec.dim();
  const double T = policy.horizon;
  double rho = spectral_bound(pspec, T);
  if (nspec.lambda != 0.0) {
    // Linearization of M about u0, a rough scale for the nonlinear part.
    const double u = u0.max_abs();
    double du = 0.0, d1 = 0.0;
    for (int i = 0; i < n; ++i) {
      du = std::max(du, diff(u0, i, 1).max_abs());
      d1 = std::max(d1, first_derivative_bound(u0.grid(), i));
    }
    double m = 2.0 * series_bound(nspec.b0, T) * u;
    for (int i = 0; i < n; ++i) m += series_bound(nspec.b[i], T) * (du + u * d1);
    for (const auto& b : nspec.bb) m += 2.0 * series_bound(b, T) * du * d1;
    rho += nspec.lambda * m;
  }
  SpatialField state = u0;
  return march(policy, cont, cont.step_fraction / rho, info, [&](double t0, const TruncationPolicy& local, RecurrenceInfo* ri) {
    const ParabolicScalarSpec ps = t0 == 0.0 ? pspec : shift_spec(pspec, t0);
    const NonlinearTermsSpec ns = t0 == 0.0 ? nspec : shift_spec(nspec, t0);
    TaylorField piece = nonlinear_parabolic_coeffs(ps, ns, shifted_or_empty(f, t0), state, local, ri);
    state = series_eval(piece, local.horizon);
    return piece;
  });
}

PiecewiseSeries march_hyperbolic(const DivFormSystemSpec& spec, const TaylorField& f, const SpatialField& u0,
                                 const SpatialField& u1, const TruncationPolicy& policy,
                                 const ContinuationPolicy& cont, MarchInfo* info) {
  const double rho = spectral_bound(spec, policy.horizon);
  SpatialField u = u0, v = u1;
  return march(policy, cont, cont.step_fraction / std::sqrt(rho), info,
               [&](double t0, const TruncationPolicy& local, RecurrenceInfo* ri) {
                 const DivFormSystemSpec s = t0 == 0.0 ? spec : shift_spec(spec, t0);
                 TaylorField piece = hyperbolic_coeffs(s, shifted_or_empty(f, t0), u, v, local, ri);
                 u = series_eval(piece, local.horizon);
                 v = series_eval_derivative(piece, local.horizon);
                 return piece;
               });
}

PiecewiseSeries march_plate(const PlateSpec& spec, const TaylorField& f, const SpatialField& u0,
                            const SpatialField& u1, const TruncationPolicy& policy, const ContinuationPolicy& cont,
                            MarchInfo* info) {
  const double rho = spectral_bound(spec);
  SpatialField u = u0, v = u1;
  return march(policy, cont, cont.step_fraction / std::sqrt(rho), info,
               [&](double t0, const TruncationPolicy& local, RecurrenceInfo* ri) {
                 TaylorField piece = plate_coeffs(spec, shifted_or_empty(f, t0), u, v, local, ri);
                 u = series_eval(piece, local.horizon);
                 v = series_eval_derivative(piece, local.horizon);
                 return piece;
               });
}

PiecewiseSeries march_maxwell(const MaxwellSpec& spec, const TaylorField& g1, const TaylorField& g2,
                              const SpatialField& D0, const SpatialField& B0, const TruncationPolicy& policy,
                              const ContinuationPolicy& cont, MarchInfo* info) {
  const double rho = spectral_bound(spec);
  SpatialField d = D0, b = B0;
  return march(policy, cont, cont.step_fraction / rho, info, [&](double t0, const TruncationPolicy& local, RecurrenceInfo* ri) {
    const MaxwellSeries s = maxwell_coeffs(spec, shifted_or_empty(g1, t0), shifted_or_empty(g2, t0), d, b, local, ri);
    d = series_eval(s.d, local.horizon);
    b = series_eval(s.b, local.horizon);
    std::vector<SpatialField> both;
    for (std::size_t k = 0; k < s.d.size(); ++k) both.push_back(stack(s.d[k], s.b[k]));
    return TaylorField(std::move(both));
  });
}

}  // namespace tibvp
