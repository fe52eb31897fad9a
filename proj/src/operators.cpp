#include "tibvp/operators.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "tibvp/errors.hpp"
#include "tibvp/stencil.hpp"

namespace tibvp {

namespace {

int max_order(const std::vector<TaylorField>& v) {
  int m = -1;
  for (const auto& s : v) m = std::max(m, s.order());
  return m;
}

std::vector<TaylorField> shifted(const std::vector<TaylorField>& v, double t0) {
  std::vector<TaylorField> out;
  out.reserve(v.size());
  for (const auto& s : v) out.push_back(s.empty() ? TaylorField() : shift_series(s, t0));
  return out;
}

// Distinct nonzero directions of {-1, 0, 1}^dim up to sign; with sign they
// give the 26 neighbour directions in 3-D.
std::vector<std::vector<double>> sample_directions(int dim) {
  std::vector<std::vector<double>> out;
  const int total = dim == 1 ? 3 : dim == 2 ? 9 : 27;
  for (int code = 0; code < total; ++code) {
    std::vector<double> xi(dim);
    int c = code;
    bool nonzero = false;
    for (int i = 0; i < dim; ++i) {
      xi[i] = static_cast<double>(c % 3) - 1.0;
      c /= 3;
      nonzero = nonzero || xi[i] != 0.0;
    }
    if (nonzero) out.push_back(std::move(xi));
  }
  return out;
}

void check_scalar_series(const TaylorField& s, const Grid& grid, const std::string& name) {
  if (s.empty()) return;
  if (s.components() != 1) throw DimensionError(name + " must be a scalar coefficient");
  if (!s.grid().compatible(grid)) throw DimensionError(name + " lives on a different grid");
}

double value_at(const TaylorField& s, std::size_t idx) {
  return s.empty() ? 0.0 : s[0](0, idx);
}

void require_grid(const SpatialField& f, const Grid& grid, const char* where) {
  if (!f.grid().compatible(grid)) throw DimensionError(std::string(where) + ": field and spec live on different grids");
}

void require_dim(const SpatialField& f, int dim, const char* where) {
  if (f.grid().dim() != dim)
    throw DimensionError(std::string(where) + ": needs a " + std::to_string(dim) + "-D grid");
}

}  // namespace

double series_bound(const TaylorField& series, double horizon) {
  double s = 0.0, p = 1.0;
  for (std::size_t k = 0; k < series.size(); ++k) {
    s += series[k].max_abs() * p;
    p *= horizon;
  }
  return s;
}

ParabolicScalarSpec ParabolicScalarSpec::zero(const Grid& grid) {
  ParabolicScalarSpec s;
  s.grid = grid;
  s.diffusion.resize(static_cast<std::size_t>(grid.dim() * grid.dim()));
  s.drift.resize(static_cast<std::size_t>(grid.dim()));
  return s;
}

ParabolicScalarSpec ParabolicScalarSpec::laplacian(const Grid& grid) {
  auto s = zero(grid);
  for (int i = 0; i < grid.dim(); ++i)
    s.diffusion[i * grid.dim() + i] = TaylorField::constant(SpatialField::sample(grid, [](const Point&) { return 1.0; }));
  s.ellipticity = 1.0;
  return s;
}

int ParabolicScalarSpec::order() const noexcept {
  return std::max({max_order(diffusion), max_order(drift), reaction.order()});
}

DivFormSystemSpec DivFormSystemSpec::zero(const Grid& grid, int components) {
  if (components < 1) throw DimensionError("system needs at least one component");
  DivFormSystemSpec s;
  s.grid = grid;
  s.components = components;
  const std::size_t n = grid.dim(), N = components;
  s.a.resize(N * N * n * n);
  s.b.resize(N * N * n);
  s.g.resize(N * N);
  return s;
}

DivFormSystemSpec DivFormSystemSpec::laplacian(const Grid& grid, int components) {
  auto s = zero(grid, components);
  const auto one = SpatialField::sample(grid, [](const Point&) { return 1.0; });
  for (int i = 0; i < components; ++i)
    for (int r = 0; r < grid.dim(); ++r) s.a_at(i, i, r, r) = TaylorField::constant(one);
  s.ellipticity = 1.0;
  return s;
}

int DivFormSystemSpec::order() const noexcept {
  return std::max({max_order(a), max_order(b), max_order(g)});
}

NonlinearTermsSpec NonlinearTermsSpec::zero(int dim) {
  NonlinearTermsSpec s;
  s.b.resize(static_cast<std::size_t>(dim));
  s.bb.resize(static_cast<std::size_t>(dim * dim));
  return s;
}

SpatialField apply_A(const ParabolicScalarSpec& spec, int j, const SpatialField& field, bool* beyond) {
  require_grid(field, spec.grid, "apply_A");
  const int n = spec.dim();
  SpatialField out(field.grid(), field.components());
  if (j > spec.order()) {
    if (beyond) *beyond = true;
    return out;
  }
  for (int i = 0; i < n; ++i) {
    for (int l = 0; l < n; ++l) {
      const SpatialField* a = spec.diffusion[i * n + l].find(j);
      if (!a) continue;
      multiply_add(*a, i == l ? diff(field, i, 2) : mixed_diff(field, i, l), out);
    }
  }
  for (int i = 0; i < n; ++i)
    if (const SpatialField* a = spec.drift[i].find(j)) out -= multiply(*a, diff(field, i, 1));
  if (const SpatialField* a = spec.reaction.find(j)) out -= multiply(*a, field);
  return out;
}

SpatialField apply_B(const DivFormSystemSpec& spec, int j, const SpatialField& field, bool* beyond) {
  const int N = spec.components;
  const int n = spec.dim();
  if (field.components() != N) throw DimensionError("apply_B: component count differs from the spec");
  require_grid(field, spec.grid, "apply_B");
  SpatialField out(field.grid(), N);
  if (j > spec.order()) {
    if (beyond) *beyond = true;
    return out;
  }
  std::vector<SpatialField> comps;
  comps.reserve(N);
  for (int c = 0; c < N; ++c) comps.push_back(field.component_field(c));

  for (int i = 0; i < N; ++i) {
    SpatialField acc(field.grid(), 1);
    for (int jj = 0; jj < N; ++jj) {
      const SpatialField& u = comps[jj];
      for (int r = 0; r < n; ++r) {
        for (int m = 0; m < n; ++m) {
          const SpatialField* a = spec.a_at(i, jj, r, m).find(j);
          if (!a) continue;
          if (r == m)
            acc += conservative_second(*a, u, r);
          else
            acc += diff(multiply(*a, diff(u, m, 1)), r, 1);
        }
      }
    }
    for (int jj = 0; jj < N; ++jj)
      for (int m = 0; m < n; ++m)
        if (const SpatialField* b = spec.b_at(i, jj, m).find(j)) acc -= multiply(*b, diff(comps[jj], m, 1));
    for (int jj = 0; jj < N; ++jj)
      if (const SpatialField* g = spec.g_at(i, jj).find(j)) acc -= multiply(*g, comps[jj]);
    out.set_component(i, acc);
  }
  return out;
}

SpatialField nonlinear_coefficient(const NonlinearTermsSpec& spec, const std::vector<SpatialField>& u,
                                   const std::vector<std::vector<SpatialField>>& du, int k) {
  if (u.empty() || static_cast<int>(u.size()) <= k)
    throw DimensionError("nonlinear_coefficient: not enough coefficients of u");
  const int n = u[0].grid().dim();
  SpatialField out(u[0].grid(), 1);

  // (XY)_q = sum_p X_p Y_{q-p}
  auto conv = [&](const std::vector<SpatialField>& X, const std::vector<SpatialField>& Y, int q) {
    SpatialField s(u[0].grid(), 1);
    for (int p = 0; p <= q; ++p) multiply_add(X[p], Y[q - p], s);
    return s;
  };

  for (int l = 0; l <= k; ++l) {
    if (const SpatialField* b0 = spec.b0.find(l)) multiply_add(*b0, conv(u, u, k - l), out);
    for (int i = 0; i < n; ++i)
      if (const SpatialField* bi = spec.b[i].find(l)) multiply_add(*bi, conv(du[i], u, k - l), out);
    for (int i = 0; i < n; ++i)
      for (int m = 0; m < n; ++m)
        if (const SpatialField* bim = spec.bb[i * n + m].find(l)) multiply_add(*bim, conv(du[i], du[m], k - l), out);
  }
  return out;
}

TaylorField apply_M_series(const NonlinearTermsSpec& spec, const TaylorField& u, int m) {
  if (m < 0) return TaylorField();
  if (static_cast<int>(u.size()) < m + 1) throw DimensionError("apply_M_series: u needs m + 1 coefficients");
  const int n = u.grid().dim();
  std::vector<SpatialField> c(u.coefficients().begin(), u.coefficients().begin() + m + 1);
  std::vector<std::vector<SpatialField>> du(n);
  for (int i = 0; i < n; ++i)
    for (const auto& ck : c) du[i].push_back(diff(ck, i, 1));
  std::vector<SpatialField> out;
  for (int k = 0; k <= m; ++k) out.push_back(nonlinear_coefficient(spec, c, du, k));
  return TaylorField(std::move(out));
}

namespace {

std::vector<double> sample_all(const Grid& grid, const PlateSpec::Fn& fn) {
  std::vector<double> v(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) v[i] = fn(grid.point(i));
  return v;
}

void finish_plate(PlateSpec& s, double a0, double a1) {
  if (a0 < 0.0 || a1 < 0.0) throw InvariantError("plate: damping coefficients must be nonnegative");
  s.alpha0 = SpatialField(s.grid, 1);
  s.alpha1 = SpatialField(s.grid, 1);
  for (std::size_t i = 0; i < s.grid.size(); ++i) {
    if (!s.grid.in_mask(i)) continue;
    s.alpha0(0, i) = a0 * s.inv_rho_h[i];
    s.alpha1(0, i) = a1 * s.inv_rho_h[i];
  }
}

}  // namespace

PlateSpec PlateSpec::from_material(const Grid& grid, const PlateMaterial& m, const Fn& thickness, double e1,
                                   double e2) {
  if (grid.dim() != 2) throw DimensionError("plate: needs a 2-D grid");
  if (!(m.E1 > 0.0 && m.E2 > 0.0 && m.G > 0.0)) throw InvariantError("plate: E1, E2 and G must be positive");
  if (!(m.mu1 >= 0.0 && m.mu1 < 1.0 && m.mu2 >= 0.0 && m.mu2 < 1.0))
    throw InvariantError("plate: Poisson ratios must lie in [0, 1)");
  if (!(m.rho > 0.0)) throw InvariantError("plate: density must be positive");
  if (!(e1 > 0.0 && e1 <= e2)) throw InvariantError("plate: thickness bounds need 0 < e1 <= e2");
  // D12 = mu2 D1 = mu1 D2 requires mu2 E1 = mu1 E2.
  const double lhs = m.mu2 * m.E1, rhs = m.mu1 * m.E2;
  if (std::abs(lhs - rhs) > 1e-12 * std::max({std::abs(lhs), std::abs(rhs), 1e-300}))
    throw InvariantError("plate: mu2 * E1 must equal mu1 * E2");

  PlateSpec s;
  s.grid = grid;
  const std::size_t n = grid.size();
  s.D1.resize(n);
  s.D2.resize(n);
  s.D12.resize(n);
  s.D3.resize(n);
  s.inv_rho_h.resize(n);
  const double denom = 12.0 * (1.0 - m.mu1 * m.mu2);
  for (std::size_t i = 0; i < n; ++i) {
    const double h = thickness(grid.point(i));
    if (grid.in_mask(i) && !(h >= e1 && h <= e2))
      throw InvariantError("plate: thickness " + std::to_string(h) + " outside [e1, e2]");
    const double h3 = h * h * h;
    s.D1[i] = h3 * m.E1 / denom;
    s.D2[i] = h3 * m.E2 / denom;
    s.D12[i] = m.mu2 * s.D1[i];
    s.D3[i] = h3 * m.G / 6.0;
    s.inv_rho_h[i] = 1.0 / (m.rho * h);
  }
  finish_plate(s, m.a0, m.a1);
  return s;
}

PlateSpec PlateSpec::from_rigidities(const Grid& grid, const Fn& D1, const Fn& D2, const Fn& D12, const Fn& D3,
                                     const Fn& rho_h, double a0, double a1) {
  if (grid.dim() != 2) throw DimensionError("plate: needs a 2-D grid");
  PlateSpec s;
  s.grid = grid;
  s.D1 = sample_all(grid, D1);
  s.D2 = sample_all(grid, D2);
  s.D12 = sample_all(grid, D12);
  s.D3 = sample_all(grid, D3);
  s.inv_rho_h = sample_all(grid, rho_h);
  for (double& v : s.inv_rho_h) {
    if (!(v > 0.0)) throw InvariantError("plate: rho * h must be positive");
    v = 1.0 / v;
  }
  finish_plate(s, a0, a1);
  return s;
}

SpatialField apply_plate_A(const PlateSpec& spec, const SpatialField& field) {
  require_dim(field, 2, "apply_plate_A");
  require_grid(field, spec.grid, "apply_plate_A");
  const Grid& g = spec.grid;
  const int n1 = g.count(0), n2 = g.count(1);
  const double h1 = g.spacing(0), h2 = g.spacing(1);
  const auto u = field.component(0);
  auto U = [&](int i, int j) -> double {
    if (i < 0 || j < 0 || i >= n1 || j >= n2) return 0.0;
    return u[g.index(i, j)];
  };

  // Normal-moment terms: w1 = D1 u_11 + D12 u_22 and w2 = D2 u_22 + D12 u_11,
  // formed at every grid point and differenced twice more.
  const std::size_t N = g.size();
  std::vector<double> w1(N), w2(N);
  for (int j = 0; j < n2; ++j)
    for (int i = 0; i < n1; ++i) {
      const std::size_t p = g.index(i, j);
      const double c = U(i, j);
      const double u11 = ((U(i + 1, j) - c) - (c - U(i - 1, j))) / (h1 * h1);
      const double u22 = ((U(i, j + 1) - c) - (c - U(i, j - 1))) / (h2 * h2);
      w1[p] = spec.D1[p] * u11 + spec.D12[p] * u22;
      w2[p] = spec.D2[p] * u22 + spec.D12[p] * u11;
    }

  // Twist term on cell corners (i + 1/2, j + 1/2), i in [-1, n1 - 1].
  const int c1 = n1 + 1, c2 = n2 + 1;
  std::vector<double> tw(static_cast<std::size_t>(c1) * c2);
  for (int j = -1; j < n2; ++j)
    for (int i = -1; i < n1; ++i) {
      double dsum = 0.0;
      int cnt = 0;
      for (int dj = 0; dj <= 1; ++dj)
        for (int di = 0; di <= 1; ++di) {
          const int a = i + di, b = j + dj;
          if (a < 0 || b < 0 || a >= n1 || b >= n2) continue;
          dsum += spec.D3[g.index(a, b)];
          ++cnt;
        }
      const double d3 = dsum / cnt;
      const double u12 = ((U(i + 1, j + 1) - U(i, j + 1)) - (U(i + 1, j) - U(i, j))) / (h1 * h2);
      tw[static_cast<std::size_t>(j + 1) * c1 + (i + 1)] = d3 * u12;
    }
  auto T = [&](int i, int j) { return tw[static_cast<std::size_t>(j + 1) * c1 + (i + 1)]; };
  auto W = [&](const std::vector<double>& w, int i, int j) -> double {
    if (i < 0 || j < 0 || i >= n1 || j >= n2) return 0.0;
    return w[g.index(i, j)];
  };

  SpatialField out(g, 1);
  auto o = out.component(0);
  for (int j = 0; j < n2; ++j)
    for (int i = 0; i < n1; ++i) {
      const std::size_t p = g.index(i, j);
      if (!g.in_mask(p)) continue;
      const double a = ((W(w1, i + 1, j) - w1[p]) - (w1[p] - W(w1, i - 1, j))) / (h1 * h1);
      const double b = ((W(w2, i, j + 1) - w2[p]) - (w2[p] - W(w2, i, j - 1))) / (h2 * h2);
      const double t = ((T(i, j) - T(i - 1, j)) - (T(i, j - 1) - T(i - 1, j - 1))) / (h1 * h2);
      o[p] = a + b + 2.0 * t;
    }
  return out;
}

SpatialField curl(const SpatialField& w) {
  require_dim(w, 3, "curl");
  if (w.components() != 3) throw DimensionError("curl: needs a 3-component field");
  const SpatialField w1 = w.component_field(0), w2 = w.component_field(1), w3 = w.component_field(2);
  SpatialField out(w.grid(), 3);
  out.set_component(0, diff(w3, 1, 1) - diff(w2, 2, 1));
  out.set_component(1, diff(w1, 2, 1) - diff(w3, 0, 1));
  out.set_component(2, diff(w2, 0, 1) - diff(w1, 1, 1));
  return out;
}

SpatialField div(const SpatialField& w) {
  require_dim(w, 3, "div");
  if (w.components() != 3) throw DimensionError("div: needs a 3-component field");
  SpatialField out = diff(w.component_field(0), 0, 1);
  out += diff(w.component_field(1), 1, 1);
  out += diff(w.component_field(2), 2, 1);
  return out;
}

void validate(const ParabolicScalarSpec& spec) {
  const int n = spec.dim();
  if (static_cast<int>(spec.diffusion.size()) != n * n || static_cast<int>(spec.drift.size()) != n)
    throw DimensionError("parabolic spec: coefficient lists do not match the dimension");
  for (int i = 0; i < n * n; ++i) check_scalar_series(spec.diffusion[i], spec.grid, "a_ij");
  for (int i = 0; i < n; ++i) check_scalar_series(spec.drift[i], spec.grid, "a_i");
  check_scalar_series(spec.reaction, spec.grid, "a");
  if (!(spec.ellipticity > 0.0)) throw InvariantError("parabolic spec: ellipticity constant must be positive");
  const auto dirs = sample_directions(n);
  for (std::size_t p = 0; p < spec.grid.size(); ++p) {
    if (!spec.grid.in_mask(p)) continue;
    for (const auto& xi : dirs) {
      double q = 0.0, xi2 = 0.0;
      for (int i = 0; i < n; ++i) {
        xi2 += xi[i] * xi[i];
        for (int l = 0; l < n; ++l) q += value_at(spec.diffusion[i * n + l], p) * xi[i] * xi[l];
      }
      if (q < spec.ellipticity * xi2)
        throw InvariantError("parabolic spec: ellipticity fails at grid point " + std::to_string(p));
    }
  }
}

void validate(const DivFormSystemSpec& spec) {
  const int n = spec.dim(), N = spec.components;
  if (static_cast<int>(spec.a.size()) != N * N * n * n || static_cast<int>(spec.b.size()) != N * N * n ||
      static_cast<int>(spec.g.size()) != N * N)
    throw DimensionError("system spec: coefficient lists do not match dimension and component count");
  for (const auto& s : spec.a) check_scalar_series(s, spec.grid, "a_ijrm");
  for (const auto& s : spec.b) check_scalar_series(s, spec.grid, "b_ijm");
  for (const auto& s : spec.g) check_scalar_series(s, spec.grid, "g_ij");
  if (!(spec.ellipticity > 0.0)) throw InvariantError("system spec: ellipticity constant must be positive");
  const auto xis = sample_directions(n);
  const auto nus = N <= 3 ? sample_directions(N) : [&] {
    std::vector<std::vector<double>> v;
    for (int i = 0; i < N; ++i)
      for (int j = i; j < N; ++j)
        for (double s : {1.0, -1.0}) {
          if (i == j && s < 0) continue;
          std::vector<double> e(N, 0.0);
          e[i] = 1.0;
          e[j] += s;
          v.push_back(e);
        }
    return v;
  }();
  for (std::size_t p = 0; p < spec.grid.size(); ++p) {
    if (!spec.grid.in_mask(p)) continue;
    for (const auto& xi : xis)
      for (const auto& nu : nus) {
        double q = 0.0, xi2 = 0.0, nu2 = 0.0;
        for (double x : xi) xi2 += x * x;
        for (double x : nu) nu2 += x * x;
        for (int i = 0; i < N; ++i)
          for (int j = 0; j < N; ++j)
            for (int r = 0; r < n; ++r)
              for (int m = 0; m < n; ++m) q += value_at(spec.a_at(i, j, r, m), p) * xi[r] * xi[m] * nu[j] * nu[i];
        if (q < spec.ellipticity * xi2 * nu2)
          throw InvariantError("system spec: strong ellipticity fails at grid point " + std::to_string(p));
      }
  }
}

void validate(const NonlinearTermsSpec& spec, int dim) {
  if (static_cast<int>(spec.b.size()) != dim || static_cast<int>(spec.bb.size()) != dim * dim)
    throw DimensionError("nonlinear spec: coefficient lists do not match the dimension");
  if (!(spec.lambda >= 0.0)) throw InvariantError("nonlinear spec: lambda must be nonnegative");
  if (spec.lambda_max > 0.0 && spec.lambda > spec.lambda_max)
    throw InvariantError("nonlinear spec: lambda exceeds its declared bound");
}

void validate(const MaxwellSpec& spec, const MaxwellBounds& bounds) {
  for (const SpatialField* f : {&spec.mu_hat, &spec.xi_hat, &spec.sigma}) {
    require_dim(*f, 3, "maxwell spec");
    if (f->components() != 1) throw DimensionError("maxwell spec: material fields must be scalar");
  }
  require_same_grid(spec.mu_hat, spec.xi_hat, "maxwell spec");
  require_same_grid(spec.mu_hat, spec.sigma, "maxwell spec");
  const Grid& g = spec.mu_hat.grid();
  for (std::size_t p = 0; p < g.size(); ++p) {
    if (!g.in_mask(p)) continue;
    const double mu = spec.mu_hat(0, p), xi = spec.xi_hat(0, p), s = spec.sigma(0, p);
    if (!(mu >= bounds.mu_min && mu <= bounds.mu_max && mu > 0.0))
      throw InvariantError("maxwell spec: mu outside its bounds at grid point " + std::to_string(p));
    if (!(xi >= bounds.xi_min && xi <= bounds.xi_max && xi > 0.0))
      throw InvariantError("maxwell spec: xi outside its bounds at grid point " + std::to_string(p));
    if (!(s >= 0.0 && s <= bounds.sigma_max))
      throw InvariantError("maxwell spec: sigma outside its bounds at grid point " + std::to_string(p));
  }
}

double spectral_bound(const ParabolicScalarSpec& spec, double horizon) {
  const int n = spec.dim();
  double rho = 0.0;
  for (int i = 0; i < n; ++i)
    for (int l = 0; l < n; ++l) {
      const double a = series_bound(spec.diffusion[i * n + l], horizon);
      if (a == 0.0) continue;
      rho += a * (i == l ? second_derivative_bound(spec.grid, i)
                         : first_derivative_bound(spec.grid, i) * first_derivative_bound(spec.grid, l));
    }
  for (int i = 0; i < n; ++i) rho += series_bound(spec.drift[i], horizon) * first_derivative_bound(spec.grid, i);
  return rho + series_bound(spec.reaction, horizon);
}

double spectral_bound(const DivFormSystemSpec& spec, double horizon) {
  const int n = spec.dim(), N = spec.components;
  double rho = 0.0;
  for (int i = 0; i < N; ++i) {
    double row = 0.0;
    for (int j = 0; j < N; ++j) {
      for (int r = 0; r < n; ++r)
        for (int m = 0; m < n; ++m) {
          const double a = series_bound(spec.a_at(i, j, r, m), horizon);
          if (a == 0.0) continue;
          row += a * (r == m ? conservative_second_bound(spec.grid, r)
                             : first_derivative_bound(spec.grid, r) * first_derivative_bound(spec.grid, m));
        }
      for (int m = 0; m < n; ++m) row += series_bound(spec.b_at(i, j, m), horizon) * first_derivative_bound(spec.grid, m);
      row += series_bound(spec.g_at(i, j), horizon);
    }
    rho = std::max(rho, row);
  }
  return rho;
}

double spectral_bound(const PlateSpec& spec) {
  const Grid& g = spec.grid;
  const double b1 = 4.0 / (g.spacing(0) * g.spacing(0));
  const double b2 = 4.0 / (g.spacing(1) * g.spacing(1));
  const double bt = 4.0 / (g.spacing(0) * g.spacing(1));
  double rho = 0.0;
  for (std::size_t p = 0; p < g.size(); ++p) {
    if (!g.in_mask(p)) continue;
    const double a = std::abs(spec.D1[p]) * b1 * b1 + std::abs(spec.D2[p]) * b2 * b2 +
                     2.0 * std::abs(spec.D12[p]) * b1 * b2 + 2.0 * std::abs(spec.D3[p]) * bt * bt;
    rho = std::max(rho, a * spec.inv_rho_h[p] + std::abs(spec.alpha0(0, p)));
  }
  return rho;
}

double spectral_bound(const MaxwellSpec& spec) {
  const Grid& g = spec.mu_hat.grid();
  double d = 0.0;
  for (int i = 0; i < 3; ++i) d = std::max(d, first_derivative_bound(g, i));
  const double speed = std::sqrt(spec.mu_hat.max_abs() * spec.xi_hat.max_abs());
  return 2.0 * d * speed + multiply(spec.sigma, spec.xi_hat).max_abs();
}

ParabolicScalarSpec shift_spec(const ParabolicScalarSpec& spec, double t0) {
  ParabolicScalarSpec s = spec;
  s.diffusion = shifted(spec.diffusion, t0);
  s.drift = shifted(spec.drift, t0);
  s.reaction = spec.reaction.empty() ? TaylorField() : shift_series(spec.reaction, t0);
  return s;
}

DivFormSystemSpec shift_spec(const DivFormSystemSpec& spec, double t0) {
  DivFormSystemSpec s = spec;
  s.a = shifted(spec.a, t0);
  s.b = shifted(spec.b, t0);
  s.g = shifted(spec.g, t0);
  return s;
}

NonlinearTermsSpec shift_spec(const NonlinearTermsSpec& spec, double t0) {
  NonlinearTermsSpec s = spec;
  s.b0 = spec.b0.empty() ? TaylorField() : shift_series(spec.b0, t0);
  s.b = shifted(spec.b, t0);
  s.bb = shifted(spec.bb, t0);
  return s;
}

}  // namespace tibvp
