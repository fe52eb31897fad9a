#pragma once

#include <cstddef>
#include <vector>

#include "tibvp/field.hpp"

namespace tibvp {

/// Truncated time-Taylor series u(x, t) ~ sum_k c_k(x) t^k.
///
/// Coefficients are normalized: c_k = (1/k!) d^k u / dt^k (., 0). All
/// coefficients share one grid and component count. Coefficients past the
/// stored order are treated as zero wherever a series is read.
class TaylorField {
 public:
  TaylorField() = default;
  explicit TaylorField(std::vector<SpatialField> coefficients);

  /// Series with the single coefficient c0 (constant in time).
  static TaylorField constant(SpatialField c0);

  bool empty() const noexcept { return coeffs_.empty(); }
  std::size_t size() const noexcept { return coeffs_.size(); }
  /// Highest stored order, -1 when empty.
  int order() const noexcept { return static_cast<int>(coeffs_.size()) - 1; }

  const SpatialField& operator[](std::size_t k) const { return coeffs_[k]; }
  SpatialField& operator[](std::size_t k) { return coeffs_[k]; }
  /// Coefficient k, or nullptr past the stored order.
  const SpatialField* find(std::size_t k) const noexcept {
    return k < coeffs_.size() ? &coeffs_[k] : nullptr;
  }

  void push_back(SpatialField c);
  void resize_order(int order);

  const Grid& grid() const;
  int components() const;
  const std::vector<SpatialField>& coefficients() const noexcept { return coeffs_; }

  /// ||c_k||_inf for every stored k.
  std::vector<double> coefficient_norms() const;

 private:
  std::vector<SpatialField> coeffs_;
};

/// Coefficients 0..m of the pointwise product series, (AB)_k = sum_p A_p B_{k-p}.
/// A is scalar and B scalar or N-component, or both share the component count.
TaylorField cauchy_product(const TaylorField& a, const TaylorField& b, int m);

/// Horner evaluation of sum_k c_k t^k.
SpatialField series_eval(const TaylorField& u, double t);
/// Horner evaluation of the time derivative sum_k k c_k t^(k-1).
SpatialField series_eval_derivative(const TaylorField& u, double t);

/// Re-expansion about t0: returns s -> u(t0 + s) as a series in s. Exact for
/// the stored (finite) series.
TaylorField shift_series(const TaylorField& u, double t0);

/// Coefficients 0..l of u.
TaylorField truncate_series(const TaylorField& u, int l);

}  // namespace tibvp
