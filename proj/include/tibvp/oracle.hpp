#pragma once

#include <string>
#include <vector>

#include "tibvp/operators.hpp"
#include "tibvp/recurrence.hpp"
#include "tibvp/taylor.hpp"

namespace tibvp {

/// Classical time stepping used to validate series solutions. The schemes
/// reuse the library's spatial operators, so differences isolate the time
/// discretization.
struct OracleConfig {
  enum class Scheme { crank_nicolson, theta_method, central_difference_wave, maxwell_leapfrog };
  Scheme scheme = Scheme::crank_nicolson;
  double theta = 0.5;             // theta_method only; crank_nicolson uses 1/2
  double dt = 1e-3;
  double horizon = 1.0;
  double cfl = 0.5;               // C in the explicit step limits
  double tolerance = 1e-12;       // linear solver relative residual
  int max_iterations = 20000;

  double effective_theta() const noexcept { return scheme == Scheme::crank_nicolson ? 0.5 : theta; }
  void validate() const;
};

const char* scheme_name(OracleConfig::Scheme scheme);
/// Accepts crank_nicolson, theta_method, central_difference_wave and maxwell_leapfrog.
OracleConfig::Scheme parse_scheme(const std::string& name);

struct Snapshots {
  std::vector<double> times;
  std::vector<SpatialField> fields;
};

/// Theta method with coefficients frozen at the step midpoint and the forcing
/// weighted as theta f(t_{n+1}) + (1 - theta) f(t_n). Implicit steps solve
/// with BiCGSTAB; the segment between consecutive snapshot times is split
/// into equal steps no longer than dt. Times must be sorted and within the
/// horizon.
Snapshots step_parabolic(const ParabolicScalarSpec& spec, const TaylorField& f, const SpatialField& u0,
                         const std::vector<double>& times, const OracleConfig& config);
Snapshots step_parabolic(const DivFormSystemSpec& spec, const TaylorField& f, const SpatialField& u0,
                         const std::vector<double>& times, const OracleConfig& config);
/// The lambda M(u) term is taken explicitly from the start of each step.
Snapshots step_parabolic(const ParabolicScalarSpec& spec, const NonlinearTermsSpec& nonlinear, const TaylorField& f,
                         const SpatialField& u0, const std::vector<double>& times, const OracleConfig& config);

/// Velocity Verlet, which is central differences in time started from u1 and
/// the t = 0 acceleration.
Snapshots step_wave(const DivFormSystemSpec& spec, const TaylorField& f, const SpatialField& u0,
                    const SpatialField& u1, const std::vector<double>& times, const OracleConfig& config);
/// Plate version; the velocity-dependent damping is handled by one explicit
/// predictor-corrector pass in the closing half kick.
Snapshots step_wave(const PlateSpec& spec, const TaylorField& f, const SpatialField& u0, const SpatialField& u1,
                    const std::vector<double>& times, const OracleConfig& config);

/// Kick-drift-kick leapfrog on (D, B) with the sigma xi damping applied as an
/// exponential factor. Snapshot fields hold the stacked 6-component state.
Snapshots step_maxwell(const MaxwellSpec& spec, const TaylorField& g1, const TaylorField& g2,
                       const SpatialField& D0, const SpatialField& B0, const std::vector<double>& times,
                       const OracleConfig& config);

/// Largest step accepted by the explicit schemes, the smaller of the
/// configured C h-type limit and the leapfrog stability limit from the
/// spectral bound.
double max_stable_dt(const DivFormSystemSpec& spec, const OracleConfig& config);
double max_stable_dt(const PlateSpec& spec, const OracleConfig& config);
double max_stable_dt(const MaxwellSpec& spec, const OracleConfig& config);
/// For theta < 1/2; infinite otherwise.
double max_stable_dt(const ParabolicScalarSpec& spec, const OracleConfig& config);

struct ErrorRow {
  double time = 0.0;
  double linf = 0.0;
  double l2 = 0.0;
  double h1 = 0.0;
};

struct ErrorTable {
  std::vector<ErrorRow> rows;
  double max_linf = 0.0;
  double max_l2 = 0.0;
  double max_h1 = 0.0;
};

/// Norms of series(t) - snapshot(t) at every snapshot time.
ErrorTable compare(const TaylorField& taylor, const Snapshots& snapshots);
ErrorTable compare(const PiecewiseSeries& taylor, const Snapshots& snapshots);

/// Default snapshot times {0, T/4, T/2, 3T/4, T}.
std::vector<double> default_times(double horizon);

}  // namespace tibvp
