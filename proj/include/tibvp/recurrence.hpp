#pragma once

#include <functional>
#include <string>
#include <vector>

#include "tibvp/operators.hpp"
#include "tibvp/taylor.hpp"

namespace tibvp {

struct TruncationPolicy {
  enum class Mode { fixed, adaptive };
  Mode mode = Mode::fixed;
  int order = 10;           // fixed mode
  double tolerance = 1e-10; // adaptive mode tail tolerance
  int max_order = 400;
  double horizon = 1.0;     // T; also drives blow-up detection (<= 0 disables it)

  static TruncationPolicy fixed(int order, double horizon = 1.0);
  static TruncationPolicy adaptive(double tolerance, double horizon, int max_order = 400);
  void validate() const;
};

/// Diagnostics of a single coefficient generation run.
struct RecurrenceInfo {
  int order_used = 0;
  bool converged = true;  // false when adaptive mode hit max_order
};

/// Spatial operator of time order j applied to a field: L_j u.
using SeriesOperator = std::function<SpatialField(int j, const SpatialField&)>;

/// apply_A / apply_B as a SeriesOperator; the spec must outlive the result.
SeriesOperator series_operator(const ParabolicScalarSpec& spec);
SeriesOperator series_operator(const DivFormSystemSpec& spec);

/// First-order-in-time recurrence c_k = (1/k) [sum_j L_j c_{k-1-j} + phi_{k-1}]
/// with L_j zero past op_order.
TaylorField first_order_coeffs(const SeriesOperator& op, int op_order, const TaylorField& f,
                               const SpatialField& u0, const TruncationPolicy& policy,
                               RecurrenceInfo* info = nullptr);
/// Second-order-in-time recurrence
/// c_k = (1/(k(k-1))) [sum_j L_j c_{k-2-j} + phi_{k-2}].
TaylorField second_order_coeffs(const SeriesOperator& op, int op_order, const TaylorField& f,
                                const SpatialField& u0, const SpatialField& u1,
                                const TruncationPolicy& policy, RecurrenceInfo* info = nullptr);

TaylorField parabolic_coeffs(const ParabolicScalarSpec& spec, const TaylorField& f, const SpatialField& u0,
                             const TruncationPolicy& policy, RecurrenceInfo* info = nullptr);
TaylorField system_parabolic_coeffs(const DivFormSystemSpec& spec, const TaylorField& f, const SpatialField& u0,
                                    const TruncationPolicy& policy, RecurrenceInfo* info = nullptr);
TaylorField nonlinear_parabolic_coeffs(const ParabolicScalarSpec& pspec, const NonlinearTermsSpec& nspec,
                                       const TaylorField& f, const SpatialField& u0,
                                       const TruncationPolicy& policy, RecurrenceInfo* info = nullptr);
TaylorField hyperbolic_coeffs(const DivFormSystemSpec& spec, const TaylorField& f, const SpatialField& u0,
                              const SpatialField& u1, const TruncationPolicy& policy,
                              RecurrenceInfo* info = nullptr);
TaylorField plate_coeffs(const PlateSpec& spec, const TaylorField& f, const SpatialField& u0,
                         const SpatialField& u1, const TruncationPolicy& policy, RecurrenceInfo* info = nullptr);

struct MaxwellSeries {
  TaylorField d;
  TaylorField b;
};
MaxwellSeries maxwell_coeffs(const MaxwellSpec& spec, const TaylorField& g1, const TaylorField& g2,
                             const SpatialField& D0, const SpatialField& B0, const TruncationPolicy& policy,
                             RecurrenceInfo* info = nullptr);

/// Forcing series phi_0 .. phi_{m-1} (parabolic) or phi_0 .. phi_{m-2}
/// (second order) for which the forward recurrence started from u's leading
/// coefficients reproduces u's m + 1 coefficients.
///
/// The operator sums are evaluated on the coefficients the forward solve will
/// itself produce, so the round trip does not amplify rounding errors through
/// the stiff spatial operator.
TaylorField manufacture_rhs(const ParabolicScalarSpec& spec, const TaylorField& u);
TaylorField manufacture_rhs(const DivFormSystemSpec& spec, const TaylorField& u, bool hyperbolic);
TaylorField manufacture_rhs(const SeriesOperator& op, int op_order, const TaylorField& u, int time_order);

struct ResidualReport {
  double coefficient_max = 0.0;       // max_k ||r_k||_inf
  double coefficient_scale = 0.0;     // max norm of the terms entering r_k
  std::vector<double> time_residual;  // ||R(t)||_inf at each sample time
  double time_max = 0.0;
  double coefficient_relative() const {
    return coefficient_scale > 0.0 ? coefficient_max / coefficient_scale : coefficient_max;
  }
};

/// Coefficient identity r_k = (k+1) c_{k+1} - sum_j L_j c_{k-j} - phi_k,
/// k < m (second order: (k+2)(k+1) c_{k+2} - ..., k < m - 1), plus the
/// polynomial R(t) = sum_k r_k t^k at the sample times, which is the residual
/// of the truncated series against the truncated forcing.
ResidualReport residual_check(const SeriesOperator& op, int op_order, const TaylorField& u, const TaylorField& f,
                              const std::vector<double>& sample_times, int time_order);
ResidualReport residual_check(const ParabolicScalarSpec& spec, const TaylorField& u, const TaylorField& f,
                              const std::vector<double>& sample_times);
ResidualReport residual_check(const DivFormSystemSpec& spec, const TaylorField& u, const TaylorField& f,
                              const std::vector<double>& sample_times, bool hyperbolic);

struct RadiusEstimate {
  bool determinate = false;
  double radius = 0.0;           // 1 / limsup ||c_k||^(1/k)
  bool super_geometric = false;  // the fitted radius grows with the window
  std::string note;
};

/// Least-squares fit of log ||c_k||_inf against k over the last half of the
/// orders. Zero coefficients are skipped; the estimate is indeterminate when
/// fewer than two nonzero orders remain.
RadiusEstimate radius_estimate(const TaylorField& u);

// Continuation: the horizon is split into steps short enough for a single
// expansion to stay well conditioned, and every step starts a new series
// from the previous step's end state with coefficients re-expanded about the
// step start.

struct ContinuationPolicy {
  bool enabled = false;
  double step_fraction = 1.0;  // step = fraction / spectral scale
  int max_steps = 1000000;
};

/// Series pieces; piece i covers [starts[i], starts[i] + lengths[i]] in the
/// local variable s = t - starts[i].
struct PiecewiseSeries {
  std::vector<double> starts;
  std::vector<double> lengths;
  std::vector<TaylorField> pieces;

  std::size_t piece_for(double t) const;
  SpatialField eval(double t) const;
  SpatialField eval_derivative(double t) const;
  int max_order() const;
  /// The single series when there is one piece; throws otherwise.
  const TaylorField& single() const;
};

struct MarchInfo {
  int steps = 0;
  int max_order_used = 0;
  bool converged = true;
  double step = 0.0;
};

/// Builds the piecewise solution on [0, policy.horizon]. With continuation
/// disabled this is one piece from the plain recurrence.
PiecewiseSeries march_parabolic(const ParabolicScalarSpec& spec, const TaylorField& f, const SpatialField& u0,
                                const TruncationPolicy& policy, const ContinuationPolicy& cont,
                                MarchInfo* info = nullptr);
PiecewiseSeries march_system_parabolic(const DivFormSystemSpec& spec, const TaylorField& f, const SpatialField& u0,
                                       const TruncationPolicy& policy, const ContinuationPolicy& cont,
                                       MarchInfo* info = nullptr);
PiecewiseSeries march_nonlinear_parabolic(const ParabolicScalarSpec& pspec, const NonlinearTermsSpec& nspec,
                                          const TaylorField& f, const SpatialField& u0,
                                          const TruncationPolicy& policy, const ContinuationPolicy& cont,
                                          MarchInfo* info = nullptr);
PiecewiseSeries march_hyperbolic(const DivFormSystemSpec& spec, const TaylorField& f, const SpatialField& u0,
                                 const SpatialField& u1, const TruncationPolicy& policy,
                                 const ContinuationPolicy& cont, MarchInfo* info = nullptr);
PiecewiseSeries march_plate(const PlateSpec& spec, const TaylorField& f, const SpatialField& u0,
                            const SpatialField& u1, const TruncationPolicy& policy, const ContinuationPolicy& cont,
                            MarchInfo* info = nullptr);
/// Maxwell pieces hold the stacked 6-component state (D, B).
PiecewiseSeries march_maxwell(const MaxwellSpec& spec, const TaylorField& g1, const TaylorField& g2,
                              const SpatialField& D0, const SpatialField& B0, const TruncationPolicy& policy,
                              const ContinuationPolicy& cont, MarchInfo* info = nullptr);

}  // namespace tibvp
