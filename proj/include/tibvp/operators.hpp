#pragma once

#include <functional>
#include <vector>

#include "tibvp/field.hpp"
#include "tibvp/taylor.hpp"

namespace tibvp {

// Every PDE coefficient is a scalar time-Taylor series of spatial fields. An
// empty series is the zero coefficient, and orders past a series' end read as
// zero.

/// Non-divergence scalar operator
///   A u = a_ij d2u/dx_i dx_j - a_i du/dx_i - a u.
struct ParabolicScalarSpec {
  Grid grid;
  std::vector<TaylorField> diffusion;  // a_ij at index i * dim + j
  std::vector<TaylorField> drift;      // a_i
  TaylorField reaction;                // a
  double ellipticity = 0.0;            // mu, used only by validate()

  /// Spec with every coefficient empty; fill in the pieces you need.
  static ParabolicScalarSpec zero(const Grid& grid);
  /// a_ij = delta_ij, everything else zero.
  static ParabolicScalarSpec laplacian(const Grid& grid);

  int dim() const noexcept { return grid.dim(); }
  /// Highest stored time order over all coefficients (-1 when all are empty).
  int order() const noexcept;
};

/// Divergence-form system operator, component i:
///   B_i u = d/dx_r (a_ijrm du_j/dx_m) - b^i_jm du_j/dx_m - g^i_j u_j.
struct DivFormSystemSpec {
  Grid grid;
  int components = 1;
  std::vector<TaylorField> a;  // a_ijrm at index ((i * N + j) * dim + r) * dim + m
  std::vector<TaylorField> b;  // b^i_jm at index (i * N + j) * dim + m
  std::vector<TaylorField> g;  // g^i_j at index i * N + j
  double ellipticity = 0.0;

  static DivFormSystemSpec zero(const Grid& grid, int components);
  /// a_ijrm = delta_ij delta_rm: the componentwise Laplacian.
  static DivFormSystemSpec laplacian(const Grid& grid, int components);

  int dim() const noexcept { return grid.dim(); }
  int order() const noexcept;
  TaylorField& a_at(int i, int j, int r, int m) { return a[((i * components + j) * dim() + r) * dim() + m]; }
  const TaylorField& a_at(int i, int j, int r, int m) const { return a[((i * components + j) * dim() + r) * dim() + m]; }
  TaylorField& b_at(int i, int j, int m) { return b[(i * components + j) * dim() + m]; }
  const TaylorField& b_at(int i, int j, int m) const { return b[(i * components + j) * dim() + m]; }
  TaylorField& g_at(int i, int j) { return g[i * components + j]; }
  const TaylorField& g_at(int i, int j) const { return g[i * components + j]; }
};

/// M(u) = b0 u^2 + b_i (du/dx_i) u + b_ij (du/dx_i)(du/dx_j), scaled by lambda
/// in the nonlinear parabolic equation.
struct NonlinearTermsSpec {
  TaylorField b0;
  std::vector<TaylorField> b;   // b_i
  std::vector<TaylorField> bb;  // b_ij at index i * dim + j
  double lambda = 0.0;
  double lambda_max = 0.0;      // user bound on lambda; 0 means unchecked

  static NonlinearTermsSpec zero(int dim);
};

struct PlateMaterial {
  double E1 = 1.0, E2 = 1.0, G = 0.5;
  double mu1 = 0.0, mu2 = 0.0;
  double rho = 1.0;
  double a0 = 0.0, a1 = 0.0;
};

/// Orthotropic plate operator
///   A u = d2/dx1^2 (D1 u_11) + d2/dx2^2 (D2 u_22) + d2/dx2^2 (D12 u_11)
///       + d2/dx1^2 (D12 u_22) + 2 d2/dx1 dx2 (D3 u_12)
/// and the damping fields alpha0 = a0 / (rho h), alpha1 = a1 / (rho h).
///
/// Rigidities and 1/(rho h) are stored at every grid point, including masked
/// ones, so the composed stencils see a smooth coefficient up to the mask edge.
struct PlateSpec {
  Grid grid;
  std::vector<double> D1, D2, D12, D3;
  std::vector<double> inv_rho_h;
  SpatialField alpha0, alpha1;

  using Fn = std::function<double(const Point&)>;
  /// Rigidities from the material constants and a thickness profile h(x)
  /// that must stay within [e1, e2], e1 > 0.
  static PlateSpec from_material(const Grid& grid, const PlateMaterial& material, const Fn& thickness,
                                 double e1, double e2);
  /// Rigidities given directly.
  static PlateSpec from_rigidities(const Grid& grid, const Fn& D1, const Fn& D2, const Fn& D12,
                                   const Fn& D3, const Fn& rho_h, double a0, double a1);
};

/// Maxwell medium: D' = curl(mu B) - sigma xi D + G1, B' = -curl(xi D) + G2.
struct MaxwellSpec {
  SpatialField mu_hat;
  SpatialField xi_hat;
  SpatialField sigma;
};

struct MaxwellBounds {
  double mu_min = 0.0, mu_max = 0.0;
  double xi_min = 0.0, xi_max = 0.0;
  double sigma_max = 0.0;
};

/// Operator built from the time-order-j coefficients. A j past the stored
/// order gives the zero field and sets *beyond when supplied.
SpatialField apply_A(const ParabolicScalarSpec& spec, int j, const SpatialField& field, bool* beyond = nullptr);
SpatialField apply_B(const DivFormSystemSpec& spec, int j, const SpatialField& field, bool* beyond = nullptr);

/// Coefficients 0..m of the time series of M(u). u needs at least m + 1
/// coefficients.
TaylorField apply_M_series(const NonlinearTermsSpec& spec, const TaylorField& u, int m);

/// Coefficient k of M(u) given u's coefficients 0..k and their first
/// derivatives du[axis][p]; the building block of apply_M_series.
SpatialField nonlinear_coefficient(const NonlinearTermsSpec& spec, const std::vector<SpatialField>& u,
                                   const std::vector<std::vector<SpatialField>>& du, int k);

SpatialField apply_plate_A(const PlateSpec& spec, const SpatialField& field);

SpatialField curl(const SpatialField& field);
SpatialField div(const SpatialField& field);

/// Checks ellipticity (sampled on up to 26 directions per point at t = 0) and
/// shape consistency; throws InvariantError or DimensionError.
void validate(const ParabolicScalarSpec& spec);
void validate(const DivFormSystemSpec& spec);
void validate(const NonlinearTermsSpec& spec, int dim);
void validate(const MaxwellSpec& spec, const MaxwellBounds& bounds);

/// Gershgorin-type bound on the spectral radius of the discrete operator for
/// t in [0, horizon], from sum_j ||coef_j||_inf horizon^j.
double spectral_bound(const ParabolicScalarSpec& spec, double horizon);
double spectral_bound(const DivFormSystemSpec& spec, double horizon);
double spectral_bound(const PlateSpec& spec);
double spectral_bound(const MaxwellSpec& spec);

/// Every coefficient series re-expanded about t0.
ParabolicScalarSpec shift_spec(const ParabolicScalarSpec& spec, double t0);
DivFormSystemSpec shift_spec(const DivFormSystemSpec& spec, double t0);
NonlinearTermsSpec shift_spec(const NonlinearTermsSpec& spec, double t0);

/// ||series||_inf bound on [0, horizon]: sum_j ||c_j||_inf horizon^j.
double series_bound(const TaylorField& series, double horizon);

}  // namespace tibvp
