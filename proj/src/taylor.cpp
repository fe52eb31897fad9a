#include "tibvp/taylor.hpp"

#include <algorithm>

#include "tibvp/errors.hpp"

namespace tibvp {

TaylorField::TaylorField(std::vector<SpatialField> coefficients) : coeffs_(std::move(coefficients)) {
  for (std::size_t k = 1; k < coeffs_.size(); ++k)
    if (!coeffs_[k].same_shape(coeffs_[0]))
      throw DimensionError("TaylorField coefficients must share grid and component count");
}

TaylorField TaylorField::constant(SpatialField c0) {
  TaylorField t;
  t.coeffs_.push_back(std::move(c0));
  return t;
}

void TaylorField::push_back(SpatialField c) {
  if (!coeffs_.empty() && !c.same_shape(coeffs_[0]))
    throw DimensionError("TaylorField coefficients must share grid and component count");
  coeffs_.push_back(std::move(c));
}

void TaylorField::resize_order(int order) {
  if (coeffs_.empty()) throw DimensionError("cannot resize an empty series");
  const std::size_t n = static_cast<std::size_t>(std::max(order, 0)) + 1;
  if (n < coeffs_.size()) {
    coeffs_.resize(n);
  } else {
    while (coeffs_.size() < n) coeffs_.emplace_back(coeffs_[0].grid(), coeffs_[0].components());
  }
}

const Grid& TaylorField::grid() const {
  if (coeffs_.empty()) throw DimensionError("empty series has no grid");
  return coeffs_[0].grid();
}

int TaylorField::components() const {
  return coeffs_.empty() ? 0 : coeffs_[0].components();
}

std::vector<double> TaylorField::coefficient_norms() const {
  std::vector<double> out;
  out.reserve(coeffs_.size());
  for (const auto& c : coeffs_) out.push_back(c.max_abs());
  return out;
}

TaylorField cauchy_product(const TaylorField& a, const TaylorField& b, int m) {
  if (a.empty() || b.empty()) throw DimensionError("cauchy_product: empty operand");
  require_same_grid(a[0], b[0], "cauchy_product");
  const bool a_scalar = a.components() == 1;
  const TaylorField& s = a_scalar ? a : b;
  const TaylorField& v = a_scalar ? b : a;
  if (s.components() != 1 && s.components() != v.components())
    throw DimensionError("cauchy_product: component counts are incompatible");
  std::vector<SpatialField> out;
  out.reserve(static_cast<std::size_t>(m) + 1);
  for (int k = 0; k <= m; ++k) {
    SpatialField ck(v.grid(), v.components());
    for (int p = 0; p <= k; ++p) {
      const SpatialField* sp = s.find(p);
      const SpatialField* vq = v.find(k - p);
      if (sp && vq) multiply_add(*sp, *vq, ck);
    }
    out.push_back(std::move(ck));
  }
  return TaylorField(std::move(out));
}

SpatialField series_eval(const TaylorField& u, double t) {
  if (u.empty()) throw DimensionError("series_eval: empty series");
  if (t == 0.0) return u[0];
  SpatialField acc = u[u.size() - 1];
  for (std::size_t k = u.size() - 1; k-- > 0;) {
    acc *= t;
    acc += u[k];
  }
  return acc;
}

SpatialField series_eval_derivative(const TaylorField& u, double t) {
  if (u.empty()) throw DimensionError("series_eval_derivative: empty series");
  SpatialField acc(u.grid(), u.components());
  for (std::size_t k = u.size() - 1; k >= 1; --k) {
    acc *= t;
    acc.axpy(static_cast<double>(k), u[k]);
  }
  return acc;
}

TaylorField shift_series(const TaylorField& u, double t0) {
  if (u.empty() || t0 == 0.0) return u;
  std::vector<SpatialField> c = u.coefficients();
  const std::size_t n = c.size();
  // Repeated synthetic division by (t - t0).
  for (std::size_t i = 0; i + 1 < n; ++i)
    for (std::size_t k = n - 1; k-- > i;) c[k].axpy(t0, c[k + 1]);
  return TaylorField(std::move(c));
}

TaylorField truncate_series(const TaylorField& u, int l) {
  if (l < 0) throw InvariantError("truncation order must be non-negative");
  const std::size_t keep = std::min<std::size_t>(u.size(), static_cast<std::size_t>(l) + 1);
  return TaylorField(std::vector<SpatialField>(u.coefficients().begin(), u.coefficients().begin() + keep));
}

}  // namespace tibvp
