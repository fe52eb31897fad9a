#include "tibvp/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

#include "tibvp/errors.hpp"
#include "tibvp/stencil.hpp"

namespace tibvp {

void OracleConfig::validate() const {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw InvariantError("oracle time step must be positive");
  if (!(horizon > 0.0) || !std::isfinite(horizon)) throw InvariantError("oracle horizon must be positive");
  if (!(theta >= 0.0 && theta <= 1.0)) throw InvariantError("theta must lie in [0, 1]");
  if (!(cfl > 0.0)) throw InvariantError("CFL constant must be positive");
  if (!(tolerance > 0.0)) throw InvariantError("solver tolerance must be positive");
  if (max_iterations < 1) throw InvariantError("solver iteration cap must be positive");
}

const char* scheme_name(OracleConfig::Scheme scheme) {
  switch (scheme) {
    case OracleConfig::Scheme::crank_nicolson: return "crank_nicolson";
    case OracleConfig::Scheme::theta_method: return "theta_method";
    case OracleConfig::Scheme::central_difference_wave: return "central_difference_wave";
    case OracleConfig::Scheme::maxwell_leapfrog: return "maxwell_leapfrog";
  }
  return "";
}

OracleConfig::Scheme parse_scheme(const std::string& name) {
  for (auto s : {OracleConfig::Scheme::crank_nicolson, OracleConfig::Scheme::theta_method,
                 OracleConfig::Scheme::central_difference_wave, OracleConfig::Scheme::maxwell_leapfrog})
    if (name == scheme_name(s)) return s;
  throw InvariantError("unknown oracle scheme '" + name + "'");
}

std::vector<double> default_times(double horizon) {
  return {0.0, 0.25 * horizon, 0.5 * horizon, 0.75 * horizon, horizon};
}

namespace {

using LinearOp = std::function<SpatialField(const SpatialField&)>;

double dot(const SpatialField& a, const SpatialField& b) {
  const auto x = a.values();
  const auto y = b.values();
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
  return s;
}

double norm2(const SpatialField& a) { return std::sqrt(dot(a, a)); }

// BiCGSTAB with restarts whenever the recursive residual claims convergence
// but the true residual does not.
SpatialField bicgstab(const LinearOp& A, const SpatialField& b, SpatialField x, double tol, int max_iter) {
  const double bnorm = norm2(b);
  if (bnorm == 0.0) return SpatialField(b.grid(), b.components());
  const double target = tol * bnorm;
  int it = 0;
  while (true) {
    SpatialField r = b - A(x);
    if (norm2(r) <= target) return x;
    if (it >= max_iter) break;
    const SpatialField rhat = r;
    double rho = 1.0, alpha = 1.0, omega = 1.0;
    SpatialField v(b.grid(), b.components()), p(b.grid(), b.components());
    bool restart = false;
    while (it < max_iter && !restart) {
      ++it;
      const double rho_new = dot(rhat, r);
      if (rho_new == 0.0 || omega == 0.0) break;
      const double beta = (rho_new / rho) * (alpha / omega);
      rho = rho_new;
      p.axpy(-omega, v);
      p *= beta;
      p += r;
      v = A(p);
      const double rv = dot(rhat, v);
      if (rv == 0.0) break;
      alpha = rho / rv;
      SpatialField s = r;
      s.axpy(-alpha, v);
      if (norm2(s) <= target) {
        x.axpy(alpha, p);
        restart = true;
        break;
      }
      const SpatialField t = A(s);
      const double tt = dot(t, t);
      omega = tt > 0.0 ? dot(t, s) / tt : 0.0;
      x.axpy(alpha, p);
      x.axpy(omega, s);
      r = std::move(s);
      r.axpy(-omega, t);
      if (norm2(r) <= target) restart = true;
    }
  }
  throw SolverError("BiCGSTAB did not reach relative residual " + std::to_string(tol) + " in " +
                        std::to_string(max_iter) + " iterations",
                    it);
}

TaylorField frozen(const TaylorField& s, double t) {
  if (s.size() <= 1) return s;
  return TaylorField::constant(series_eval(s, t));
}

ParabolicScalarSpec freeze(const ParabolicScalarSpec& spec, double t) {
  if (spec.order() <= 0) return spec;
  ParabolicScalarSpec out = spec;
  for (auto& c : out.diffusion) c = frozen(c, t);
  for (auto& c : out.drift) c = frozen(c, t);
  out.reaction = frozen(out.reaction, t);
  return out;
}

DivFormSystemSpec freeze(const DivFormSystemSpec& spec, double t) {
  if (spec.order() <= 0) return spec;
  DivFormSystemSpec out = spec;
  for (auto& c : out.a) c = frozen(c, t);
  for (auto& c : out.b) c = frozen(c, t);
  for (auto& c : out.g) c = frozen(c, t);
  return out;
}

NonlinearTermsSpec freeze(const NonlinearTermsSpec& spec, double t) {
  NonlinearTermsSpec out = spec;
  out.b0 = frozen(out.b0, t);
  for (auto& c : out.b) c = frozen(c, t);
  for (auto& c : out.bb) c = frozen(c, t);
  return out;
}

// Writes f(t) into out; false when there is no forcing.
bool forcing_at(const TaylorField& f, double t, SpatialField& out) {
  if (f.empty()) return false;
  out = series_eval(f, t);
  return true;
}

void check_times(const std::vector<double>& times, double horizon) {
  double prev = 0.0;
  for (double t : times) {
    if (!std::isfinite(t) || t < prev) throw InvariantError("snapshot times must be sorted and nonnegative");
    if (t > horizon * (1.0 + 1e-12)) throw InvariantError("snapshot time exceeds the oracle horizon");
    prev = t;
  }
}

template <class State, class Step, class Out>
Snapshots drive(State& state, const std::vector<double>& times, const OracleConfig& config, Step step, Out out) {
  config.validate();
  check_times(times, config.horizon);
  Snapshots snaps;
  double t = 0.0;
  for (double ts : times) {
    if (ts > t) {
      const double span = ts - t;
      const long n = std::max(1L, static_cast<long>(std::ceil(span / config.dt - 1e-9)));
      const double h = span / static_cast<double>(n);
      for (long i = 0; i < n; ++i) step(state, t + static_cast<double>(i) * h, h);
      t = ts;
    }
    snaps.times.push_back(ts);
    snaps.fields.push_back(out(state));
  }
  return snaps;
}

void require_limit(double dt, double limit, const char* what) {
  if (dt > limit)
    throw InvariantError(std::string(what) + ": time step " + std::to_string(dt) + " exceeds the stability limit " +
                         std::to_string(limit));
}

// One theta step for u' = L u + f - lambda M(u), the M term explicit.
template <class Spec>
Snapshots theta_run(const Spec& spec, const TaylorField& f, const SpatialField& u0, const std::vector<double>& times,
                    const OracleConfig& config,
                    const std::function<SpatialField(const Spec&, const SpatialField&)>& apply,
                    const std::function<void(double, double, const SpatialField&, SpatialField&)>& explicit_term) {
  const double theta = config.effective_theta();
  SpatialField u = u0;
  SpatialField fa, fb;
  const bool varying = spec.order() > 0;
  Spec scratch;
  auto step = [&](SpatialField& x, double t, double h) {
    if (varying) scratch = freeze(spec, t + 0.5 * h);
    const Spec& mid = varying ? scratch : spec;
    SpatialField rhs = x;
    if (theta < 1.0) rhs.axpy((1.0 - theta) * h, apply(mid, x));
    if (forcing_at(f, t, fa)) rhs.axpy((1.0 - theta) * h, fa);
    if (forcing_at(f, t + h, fb)) rhs.axpy(theta * h, fb);
    if (explicit_term) explicit_term(t, h, x, rhs);
    if (theta == 0.0) {
      x = std::move(rhs);
      return;
    }
    const LinearOp A = [&](const SpatialField& y) {
      SpatialField r = y;
      r.axpy(-theta * h, apply(mid, y));
      return r;
    };
    x = bicgstab(A, rhs, x, config.tolerance, config.max_iterations);
  };
  return drive(u, times, config, step, [](const SpatialField& x) { return x; });
}

}  // namespace

double max_stable_dt(const ParabolicScalarSpec& spec, const OracleConfig& config) {
  const double theta = config.effective_theta();
  if (theta >= 0.5) return std::numeric_limits<double>::infinity();
  double amax = 0.0;
  for (int i = 0; i < spec.dim(); ++i)
    amax = std::max(amax, series_bound(spec.diffusion[i * spec.dim() + i], config.horizon));
  const double h = spec.grid.min_spacing();
  double limit = amax > 0.0 ? config.cfl * h * h / amax : std::numeric_limits<double>::infinity();
  const double rho = spectral_bound(spec, config.horizon);
  if (rho > 0.0) limit = std::min(limit, 2.0 / ((1.0 - 2.0 * theta) * rho));
  return limit;
}

double max_stable_dt(const DivFormSystemSpec& spec, const OracleConfig& config) {
  double amax = 0.0;
  for (const auto& a : spec.a) amax = std::max(amax, series_bound(a, config.horizon));
  const double h = spec.grid.min_spacing();
  double limit = amax > 0.0 ? config.cfl * h / std::sqrt(amax) : std::numeric_limits<double>::infinity();
  const double rho = spectral_bound(spec, config.horizon);
  if (rho > 0.0) limit = std::min(limit, 2.0 / std::sqrt(rho));
  return limit;
}

double max_stable_dt(const PlateSpec& spec, const OracleConfig& config) {
  double dmax = 0.0;
  for (std::size_t p = 0; p < spec.grid.size(); ++p) {
    if (!spec.grid.in_mask(p)) continue;
    const double d = std::max({std::abs(spec.D1[p]), std::abs(spec.D2[p]), std::abs(spec.D12[p]), std::abs(spec.D3[p])});
    dmax = std::max(dmax, d * spec.inv_rho_h[p]);
  }
  const double h = spec.grid.min_spacing();
  double limit = dmax > 0.0 ? config.cfl * h * h / std::sqrt(dmax) : std::numeric_limits<double>::infinity();
  const double rho = spectral_bound(spec);
  if (rho > 0.0) limit = std::min(limit, 2.0 / std::sqrt(rho));
  return limit;
}

double max_stable_dt(const MaxwellSpec& spec, const OracleConfig& config) {
  const SpatialField speed2 = multiply(spec.mu_hat, spec.xi_hat);
  const double c = std::sqrt(speed2.max_abs());
  const double h = spec.mu_hat.grid().min_spacing();
  double limit = c > 0.0 ? config.cfl * h / c : std::numeric_limits<double>::infinity();
  const double rho = spectral_bound(spec);
  if (rho > 0.0) limit = std::min(limit, 2.0 / rho);
  return limit;
}

Snapshots step_parabolic(const ParabolicScalarSpec& spec, const TaylorField& f, const SpatialField& u0,
                         const std::vector<double>& times, const OracleConfig& config) {
  config.validate();
  require_limit(config.dt, max_stable_dt(spec, config), "parabolic oracle");
  return theta_run<ParabolicScalarSpec>(
      spec, f, u0, times, config, [](const ParabolicScalarSpec& s, const SpatialField& x) { return apply_A(s, 0, x); },
      nullptr);
}

Snapshots step_parabolic(const DivFormSystemSpec& spec, const TaylorField& f, const SpatialField& u0,
                         const std::vector<double>& times, const OracleConfig& config) {
  config.validate();
  if (config.effective_theta() < 0.5) {
    const double h = spec.grid.min_spacing();
    double amax = 0.0;
    for (const auto& a : spec.a) amax = std::max(amax, series_bound(a, config.horizon));
    double limit = amax > 0.0 ? config.cfl * h * h / amax : std::numeric_limits<double>::infinity();
    const double rho = spectral_bound(spec, config.horizon);
    if (rho > 0.0) limit = std::min(limit, 2.0 / ((1.0 - 2.0 * config.effective_theta()) * rho));
    require_limit(config.dt, limit, "parabolic oracle");
  }
  return theta_run<DivFormSystemSpec>(
      spec, f, u0, times, config, [](const DivFormSystemSpec& s, const SpatialField& x) { return apply_B(s, 0, x); },
      nullptr);
}

Snapshots step_parabolic(const ParabolicScalarSpec& spec, const NonlinearTermsSpec& nonlinear, const TaylorField& f,
                         const SpatialField& u0, const std::vector<double>& times, const OracleConfig& config) {
  config.validate();
  require_limit(config.dt, max_stable_dt(spec, config), "parabolic oracle");
  validate(nonlinear, spec.dim());
  const double lambda = nonlinear.lambda;
  std::function<void(double, double, const SpatialField&, SpatialField&)> term;
  if (lambda != 0.0) {
    term = [&](double t, double h, const SpatialField& x, SpatialField& rhs) {
      const NonlinearTermsSpec now = freeze(nonlinear, t);
      std::vector<std::vector<SpatialField>> du(spec.dim());
      for (int a = 0; a < spec.dim(); ++a) du[a].push_back(diff(x, a, 1));
      rhs.axpy(-lambda * h, nonlinear_coefficient(now, {x}, du, 0));
    };
  }
  return theta_run<ParabolicScalarSpec>(
      spec, f, u0, times, config, [](const ParabolicScalarSpec& s, const SpatialField& x) { return apply_A(s, 0, x); },
      term);
}

Snapshots step_wave(const DivFormSystemSpec& spec, const TaylorField& f, const SpatialField& u0,
                    const SpatialField& u1, const std::vector<double>& times, const OracleConfig& config) {
  config.validate();
  require_limit(config.dt, max_stable_dt(spec, config), "wave oracle");
  if (!u0.same_shape(u1)) throw DimensionError("step_wave: u0 and u1 differ in shape");
  SpatialField fa;
  const bool varying = spec.order() > 0;
  auto accel = [&](const SpatialField& u, double t) {
    SpatialField a = varying ? apply_B(freeze(spec, t), 0, u) : apply_B(spec, 0, u);
    if (forcing_at(f, t, fa)) a += fa;
    return a;
  };
  struct State {
    SpatialField u, v, a;
  } st{u0, u1, accel(u0, 0.0)};
  auto step = [&](State& s, double t, double h) {
    s.v.axpy(0.5 * h, s.a);
    s.u.axpy(h, s.v);
    s.a = accel(s.u, t + h);
    s.v.axpy(0.5 * h, s.a);
  };
  return drive(st, times, config, step, [](const State& s) { return s.u; });
}

Snapshots step_wave(const PlateSpec& spec, const TaylorField& f, const SpatialField& u0, const SpatialField& u1,
                    const std::vector<double>& times, const OracleConfig& config) {
  config.validate();
  require_limit(config.dt, max_stable_dt(spec, config), "plate oracle");
  if (!u0.same_shape(u1) || u0.components() != 1) throw DimensionError("step_wave: u0 and u1 must be scalar fields");
  SpatialField inv_rho_h(spec.grid, 1);
  for (std::size_t p = 0; p < spec.grid.size(); ++p)
    if (spec.grid.in_mask(p)) inv_rho_h(0, p) = spec.inv_rho_h[p];
  const bool damped = spec.alpha0.max_abs() != 0.0 || spec.alpha1.max_abs() != 0.0;
  SpatialField fa;
  auto accel = [&](const SpatialField& u, const SpatialField& v, double t) {
    SpatialField a(u.grid(), 1);
    a -= multiply(inv_rho_h, apply_plate_A(spec, u));
    if (forcing_at(f, t, fa)) a += fa;
    if (damped) {
      a -= multiply(spec.alpha0, v);
      a -= multiply(spec.alpha1, multiply(multiply(v, v), v));
    }
    return a;
  };
  struct State {
    SpatialField u, v, a;
  } st{u0, u1, accel(u0, u1, 0.0)};
  auto step = [&](State& s, double t, double h) {
    s.v.axpy(0.5 * h, s.a);
    s.u.axpy(h, s.v);
    const SpatialField vh = s.v;
    s.a = accel(s.u, vh, t + h);
    if (damped) {
      SpatialField vp = vh;
      vp.axpy(0.5 * h, s.a);
      s.a = accel(s.u, vp, t + h);
    }
    s.v.axpy(0.5 * h, s.a);
  };
  return drive(st, times, config, step, [](const State& s) { return s.u; });
}

Snapshots step_maxwell(const MaxwellSpec& spec, const TaylorField& g1, const TaylorField& g2, const SpatialField& D0,
                       const SpatialField& B0, const std::vector<double>& times, const OracleConfig& config) {
  config.validate();
  if (D0.components() != 3 || B0.components() != 3 || D0.grid().dim() != 3)
    throw DimensionError("step_maxwell: D0 and B0 must be 3-vector fields on a 3-D grid");
  require_limit(config.dt, max_stable_dt(spec, config), "maxwell oracle");
  const SpatialField damping = multiply(spec.sigma, spec.xi_hat);
  const bool damped = damping.max_abs() != 0.0;
  SpatialField decay;
  double decay_h = -1.0;
  SpatialField g;
  struct State {
    SpatialField d, b;
  } st{D0, B0};
  auto kick = [&](State& s, double t, double h) {
    SpatialField k = curl(multiply(spec.mu_hat, s.b));
    if (forcing_at(g1, t, g)) k += g;
    s.d.axpy(h, k);
  };
  auto damp = [&](State& s, double h) {
    if (!damped) return;
    if (h != decay_h) {
      decay = damping;
      for (double& v : decay.values()) v = std::exp(-h * v);
      decay.apply_mask();
      decay_h = h;
    }
    s.d = multiply(decay, s.d);
  };
  auto step = [&](State& s, double t, double h) {
    damp(s, 0.5 * h);
    kick(s, t, 0.5 * h);
    SpatialField k = -curl(multiply(spec.xi_hat, s.d));
    if (forcing_at(g2, t + 0.5 * h, g)) k += g;
    s.b.axpy(h, k);
    kick(s, t + h, 0.5 * h);
    damp(s, 0.5 * h);
  };
  return drive(st, times, config, step, [](const State& s) {
    SpatialField out(s.d.grid(), 6);
    for (int c = 0; c < 3; ++c) {
      out.set_component(c, s.d.component_field(c));
      out.set_component(c + 3, s.b.component_field(c));
    }
    return out;
  });
}

namespace {

template <class Eval>
ErrorTable compare_with(const Eval& eval, const Snapshots& snapshots) {
  ErrorTable table;
  for (std::size_t i = 0; i < snapshots.times.size(); ++i) {
    const double t = snapshots.times[i];
    const SpatialField d = eval(t) - snapshots.fields[i];
    const FieldNorms n = norms(d);
    table.rows.push_back({t, n.linf, n.l2, n.h1_seminorm});
    table.max_linf = std::max(table.max_linf, n.linf);
    table.max_l2 = std::max(table.max_l2, n.l2);
    table.max_h1 = std::max(table.max_h1, n.h1_seminorm);
  }
  return table;
}

}  // namespace

ErrorTable compare(const TaylorField& taylor, const Snapshots& snapshots) {
  return compare_with([&](double t) { return series_eval(taylor, t); }, snapshots);
}

ErrorTable compare(const PiecewiseSeries& taylor, const Snapshots& snapshots) {
  return compare_with([&](double t) { return taylor.eval(t); }, snapshots);
}

}  // namespace tibvp
