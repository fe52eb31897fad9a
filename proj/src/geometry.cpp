#include "tibvp/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "tibvp/errors.hpp"

namespace tibvp {

namespace {

constexpr double kEllipsoidTol = 1e-13;
constexpr int kEllipsoidMaxIter = 100;

double norm(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

// Solves the n x n system M y = r in place by partial pivoting; false when
// M is numerically singular.
bool solve_small(std::vector<double>& m, std::vector<double>& r, int n) {
  double scale = 0.0;
  for (double v : m) scale = std::max(scale, std::abs(v));
  if (scale == 0.0) return false;
  for (int c = 0; c < n; ++c) {
    int piv = c;
    for (int i = c + 1; i < n; ++i)
      if (std::abs(m[i * n + c]) > std::abs(m[piv * n + c])) piv = i;
    if (std::abs(m[piv * n + c]) < 1e-12 * scale) return false;
    if (piv != c) {
      for (int j = 0; j < n; ++j) std::swap(m[c * n + j], m[piv * n + j]);
      std::swap(r[c], r[piv]);
    }
    for (int i = c + 1; i < n; ++i) {
      const double f = m[i * n + c] / m[c * n + c];
      for (int j = c; j < n; ++j) m[i * n + j] -= f * m[c * n + j];
      r[i] -= f * r[c];
    }
  }
  for (int i = n - 1; i >= 0; --i) {
    double s = r[i];
    for (int j = i + 1; j < n; ++j) s -= m[i * n + j] * r[j];
    r[i] = s / m[i * n + i];
  }
  return true;
}

// Calls visit(subset) for every size-k subset of {0..m-1} in lexicographic order.
template <class F>
void for_each_subset(int m, int k, F&& visit) {
  if (k > m) return;
  std::vector<int> idx(k);
  std::iota(idx.begin(), idx.end(), 0);
  while (true) {
    visit(idx);
    int i = k - 1;
    while (i >= 0 && idx[i] == m - k + i) --i;
    if (i < 0) return;
    ++idx[i];
    for (int j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
}

int rank_of(std::vector<std::vector<double>> rows, int n) {
  int rank = 0;
  for (int c = 0; c < n && rank < static_cast<int>(rows.size()); ++c) {
    std::size_t piv = rank;
    for (std::size_t i = rank; i < rows.size(); ++i)
      if (std::abs(rows[i][c]) > std::abs(rows[piv][c])) piv = i;
    if (std::abs(rows[piv][c]) < 1e-12) continue;
    std::swap(rows[rank], rows[piv]);
    for (std::size_t i = rank + 1; i < rows.size(); ++i) {
      const double f = rows[i][c] / rows[rank][c];
      for (int j = c; j < n; ++j) rows[i][j] -= f * rows[rank][j];
    }
    ++rank;
  }
  return rank;
}

// Closest point on the ellipsoid sum (y_i / A_i)^2 = 1 to x (centered
// coordinates), via Newton on the Lagrange parameter s with
// y_i = A_i^2 x_i / (A_i^2 + s).
std::vector<double> ellipsoid_closest(std::span<const double> x, std::span<const double> axes) {
  const int n = static_cast<int>(x.size());
  double inside = 0.0;
  for (int i = 0; i < n; ++i) inside += (x[i] / axes[i]) * (x[i] / axes[i]);
  std::vector<double> y(n);
  if (inside == 1.0) {
    std::copy(x.begin(), x.end(), y.begin());
    return y;
  }
  const double amin2 = [&] {
    double m = std::numeric_limits<double>::infinity();
    for (double a : axes) m = std::min(m, a * a);
    return m;
  }();

  auto F = [&](double s, double* dF) {
    double f = -1.0, d = 0.0;
    for (int i = 0; i < n; ++i) {
      const double a2 = axes[i] * axes[i];
      const double q = axes[i] * x[i] / (a2 + s);
      f += q * q;
      d += -2.0 * q * q / (a2 + s);
    }
    if (dF) *dF = d;
    return f;
  };

  double lo, hi;
  if (inside < 1.0) {
    // Interior: root in (-amin2, 0]. If the components along the shortest
    // axes vanish F may stay negative on the whole interval; the closest
    // point then sits at s = -amin2 off the symmetry plane.
    double rest = -1.0;
    int first_min = -1;
    bool degenerate = true;
    for (int i = 0; i < n; ++i) {
      const double a2 = axes[i] * axes[i];
      if (a2 == amin2) {
        if (first_min < 0) first_min = i;
        if (x[i] != 0.0) degenerate = false;
      } else {
        const double q = axes[i] * x[i] / (a2 - amin2);
        rest += q * q;
      }
    }
    if (degenerate && rest <= 0.0) {
      double used = 0.0;
      for (int i = 0; i < n; ++i) {
        const double a2 = axes[i] * axes[i];
        y[i] = a2 == amin2 ? 0.0 : a2 * x[i] / (a2 - amin2);
        if (a2 != amin2) used += (y[i] / axes[i]) * (y[i] / axes[i]);
      }
      y[first_min] = axes[first_min] * std::sqrt(std::max(0.0, 1.0 - used));
      return y;
    }
    lo = -amin2;
    hi = 0.0;
  } else {
    lo = 0.0;
    double amax = 0.0;
    for (double a : axes) amax = std::max(amax, a);
    hi = amax * norm(x) + amax * amax;
  }

  // Safeguarded Newton: F is monotone decreasing in s on the bracket.
  double s = 0.5 * (lo + hi);
  for (int it = 0; it < kEllipsoidMaxIter; ++it) {
    double d = 0.0;
    const double f = F(s, &d);
    if (f > 0.0)
      lo = s;
    else
      hi = s;
    double next = s - f / d;
    if (!(next > lo && next < hi) || !std::isfinite(next)) next = 0.5 * (lo + hi);
    const double step = std::abs(next - s);
    s = next;
    if (step <= kEllipsoidTol * (std::abs(s) + amin2)) break;
  }
  double level = 0.0;
  for (int i = 0; i < n; ++i) {
    const double a2 = axes[i] * axes[i];
    y[i] = a2 * x[i] / (a2 + s);
    level += (y[i] / axes[i]) * (y[i] / axes[i]);
  }
  // Near s = -amin2 the map s -> y is steep, so the leftover error in s shows
  // up as an offset from the surface; a radial rescale removes it.
  const double scale = 1.0 / std::sqrt(level);
  for (double& v : y) v *= scale;
  return y;
}

void check_dim(int want, std::size_t got, const char* where) {
  if (static_cast<int>(got) != want)
    throw DimensionError(std::string(where) + ": expected a " + std::to_string(want) +
                         "-vector, got " + std::to_string(got));
}

}  // namespace

Domain::Domain(Shape shape) : shape_(std::move(shape)) {
  std::visit(
      [this](auto& s) {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, BoxDomain>) {
          dim_ = static_cast<int>(s.lower.size());
          if (dim_ < 1 || dim_ > 3 || s.upper.size() != s.lower.size())
            throw DimensionError("box: bounds must be 1..3-vectors of equal length");
          inradius_ = std::numeric_limits<double>::infinity();
          double d2 = 0.0;
          for (int i = 0; i < dim_; ++i) {
            if (!(s.lower[i] < s.upper[i])) throw InvariantError("box: lower bound must be below upper bound");
            inradius_ = std::min(inradius_, 0.5 * (s.upper[i] - s.lower[i]));
            d2 += (s.upper[i] - s.lower[i]) * (s.upper[i] - s.lower[i]);
            lower_[i] = s.lower[i];
            upper_[i] = s.upper[i];
          }
          diameter_ = std::sqrt(d2);
        } else if constexpr (std::is_same_v<T, BallDomain>) {
          dim_ = static_cast<int>(s.center.size());
          if (dim_ < 1 || dim_ > 3) throw DimensionError("ball: center must be a 1..3-vector");
          if (!(s.radius > 0.0)) throw InvariantError("ball: radius must be positive");
          inradius_ = s.radius;
          diameter_ = 2.0 * s.radius;
          for (int i = 0; i < dim_; ++i) {
            lower_[i] = s.center[i] - s.radius;
            upper_[i] = s.center[i] + s.radius;
          }
        } else if constexpr (std::is_same_v<T, EllipsoidDomain>) {
          dim_ = static_cast<int>(s.center.size());
          if (dim_ < 1 || dim_ > 3 || s.b.size() != s.center.size())
            throw DimensionError("ellipsoid: center and semi-axes must be 1..3-vectors of equal length");
          if (!(s.level > 0.0)) throw InvariantError("ellipsoid: level must be positive");
          inradius_ = std::numeric_limits<double>::infinity();
          double amax = 0.0;
          for (int i = 0; i < dim_; ++i) {
            if (!(s.b[i] > 0.0)) throw InvariantError("ellipsoid: semi-axes must be positive");
            const double a = s.level * s.b[i];
            inradius_ = std::min(inradius_, a);
            amax = std::max(amax, a);
            lower_[i] = s.center[i] - a;
            upper_[i] = s.center[i] + a;
          }
          diameter_ = 2.0 * amax;
        } else {
          const int m = static_cast<int>(s.normals.size());
          if (m == 0 || s.offsets.size() != s.normals.size())
            throw DimensionError("polytope: need matching lists of face normals and offsets");
          dim_ = static_cast<int>(s.normals[0].size());
          if (dim_ < 1 || dim_ > 3) throw DimensionError("polytope: normals must be 1..3-vectors");
          for (const auto& a : s.normals) {
            if (static_cast<int>(a.size()) != dim_) throw DimensionError("polytope: normals differ in length");
            if (norm(a) == 0.0) throw InvariantError("polytope: zero face normal");
          }
          const int n = dim_;
          if (rank_of(s.normals, n) < n) throw InvariantError("polytope: domain is unbounded");
          // Pointed recession cone: an extreme ray has n-1 independent tight faces.
          bool unbounded = false;
          for_each_subset(m, n - 1, [&](const std::vector<int>& sub) {
            if (unbounded) return;
            std::vector<double> d(n, 0.0);
            if (n == 1) {
              d[0] = 1.0;
            } else if (n == 2) {
              const auto& a = s.normals[sub[0]];
              d = {-a[1], a[0]};
            } else {
              const auto& a = s.normals[sub[0]];
              const auto& b = s.normals[sub[1]];
              d = {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
            }
            if (norm(d) < 1e-12) return;
            for (double sign : {1.0, -1.0}) {
              bool ray = true;
              for (const auto& a : s.normals)
                if (sign * dot(a, d) > 1e-12 * norm(a) * norm(d)) ray = false;
              if (ray) unbounded = true;
            }
          });
          if (unbounded) throw InvariantError("polytope: domain is unbounded");

          // Vertices, for the bounding box and diameter.
          std::vector<std::vector<double>> vertices;
          for_each_subset(m, n, [&](const std::vector<int>& sub) {
            std::vector<double> M(n * n), r(n);
            for (int i = 0; i < n; ++i) {
              for (int j = 0; j < n; ++j) M[i * n + j] = s.normals[sub[i]][j];
              r[i] = s.offsets[sub[i]];
            }
            if (!solve_small(M, r, n)) return;
            for (int k = 0; k < m; ++k)
              if (dot(s.normals[k], r) - s.offsets[k] > 1e-10 * (1.0 + std::abs(s.offsets[k]))) return;
            vertices.push_back(r);
          });
          if (vertices.empty()) throw InvariantError("polytope: interior is empty");

          // Chebyshev center: maximize r subject to a_k . x + r |a_k| <= c_k.
          // The optimum is a vertex of the lifted system.
          double best = -std::numeric_limits<double>::infinity();
          for_each_subset(m, n + 1, [&](const std::vector<int>& sub) {
            const int n1 = n + 1;
            std::vector<double> M(n1 * n1), r(n1);
            for (int i = 0; i < n1; ++i) {
              const auto& a = s.normals[sub[i]];
              for (int j = 0; j < n; ++j) M[i * n1 + j] = a[j];
              M[i * n1 + n] = norm(a);
              r[i] = s.offsets[sub[i]];
            }
            if (!solve_small(M, r, n1)) return;
            for (int k = 0; k < m; ++k) {
              const auto& a = s.normals[k];
              if (dot(a, std::span<const double>(r.data(), n)) + r[n] * norm(a) - s.offsets[k] >
                  1e-10 * (1.0 + std::abs(s.offsets[k])))
                return;
            }
            best = std::max(best, r[n]);
          });
          if (!(best > 0.0)) throw InvariantError("polytope: interior is empty");
          inradius_ = best;

          for (int i = 0; i < n; ++i) {
            lower_[i] = std::numeric_limits<double>::infinity();
            upper_[i] = -std::numeric_limits<double>::infinity();
          }
          for (const auto& v : vertices)
            for (int i = 0; i < n; ++i) {
              lower_[i] = std::min(lower_[i], v[i]);
              upper_[i] = std::max(upper_[i], v[i]);
            }
          for (const auto& v : vertices)
            for (const auto& w : vertices) {
              double d2 = 0.0;
              for (int i = 0; i < n; ++i) d2 += (v[i] - w[i]) * (v[i] - w[i]);
              diameter_ = std::max(diameter_, std::sqrt(d2));
            }
        }
      },
      shape_);
}

Domain Domain::box(std::vector<double> lower, std::vector<double> upper) {
  return Domain(BoxDomain{std::move(lower), std::move(upper)});
}

Domain Domain::ball(std::vector<double> center, double radius) {
  return Domain(BallDomain{std::move(center), radius});
}

Domain Domain::ellipsoid(std::vector<double> center, std::vector<double> b, double level) {
  return Domain(EllipsoidDomain{std::move(center), std::move(b), level});
}

Domain Domain::polytope(std::vector<std::vector<double>> normals, std::vector<double> offsets) {
  return Domain(PolytopeDomain{std::move(normals), std::move(offsets)});
}

const char* Domain::kind() const noexcept {
  switch (shape_.index()) {
    case 0: return "box";
    case 1: return "ball";
    case 2: return "ellipsoid";
    default: return "polytope";
  }
}

double Domain::signed_distance(std::span<const double> x) const {
  check_dim(dim_, x.size(), "signed_distance");
  for (double v : x)
    if (!std::isfinite(v)) throw InvariantError("signed_distance: point is not finite");
  Point p{};
  std::copy(x.begin(), x.end(), p.begin());
  return signed_distance(p);
}

double Domain::signed_distance(const Point& p) const {
  const int n = dim_;
  return std::visit(
      [&](const auto& s) -> double {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, BoxDomain>) {
          double inner = std::numeric_limits<double>::infinity();
          double outer2 = 0.0;
          bool outside = false;
          for (int i = 0; i < n; ++i) {
            const double below = s.lower[i] - p[i];
            const double above = p[i] - s.upper[i];
            const double gap = std::max(below, above);
            if (gap > 0.0) {
              outside = true;
              outer2 += gap * gap;
            }
            inner = std::min(inner, -gap);
          }
          return outside ? std::sqrt(outer2) : -inner;
        } else if constexpr (std::is_same_v<T, BallDomain>) {
          double r2 = 0.0;
          for (int i = 0; i < n; ++i) r2 += (p[i] - s.center[i]) * (p[i] - s.center[i]);
          return std::sqrt(r2) - s.radius;
        } else if constexpr (std::is_same_v<T, EllipsoidDomain>) {
          std::vector<double> x(n), axes(n);
          double q = 0.0;
          for (int i = 0; i < n; ++i) {
            x[i] = p[i] - s.center[i];
            axes[i] = s.level * s.b[i];
            q += (x[i] / axes[i]) * (x[i] / axes[i]);
          }
          const auto y = ellipsoid_closest(x, axes);
          double d2 = 0.0;
          for (int i = 0; i < n; ++i) d2 += (x[i] - y[i]) * (x[i] - y[i]);
          return q < 1.0 ? -std::sqrt(d2) : std::sqrt(d2);
        } else {
          double best = -std::numeric_limits<double>::infinity();
          for (std::size_t k = 0; k < s.normals.size(); ++k) {
            const auto& a = s.normals[k];
            double f = -s.offsets[k];
            for (int i = 0; i < n; ++i) f += a[i] * p[i];
            best = std::max(best, f / norm(a));
          }
          return best;
        }
      },
      shape_);
}

std::vector<double> Domain::project_to_boundary(std::span<const double> x) const {
  check_dim(dim_, x.size(), "project_to_boundary");
  Point p{};
  std::copy(x.begin(), x.end(), p.begin());
  if (!(signed_distance(p) < 0.0)) throw InvariantError("project_to_boundary: point is not inside the domain");
  const Point q = project_to_boundary(p);
  return std::vector<double>(q.begin(), q.begin() + dim_);
}

Point Domain::project_to_boundary(const Point& p) const {
  const int n = dim_;
  Point out = p;
  std::visit(
      [&](const auto& s) {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, BoxDomain>) {
          // Faces ordered lower/upper per axis; strict comparison keeps the
          // lowest index on ties.
          double best = std::numeric_limits<double>::infinity();
          int face = 0;
          for (int i = 0; i < n; ++i) {
            const double dl = p[i] - s.lower[i];
            const double du = s.upper[i] - p[i];
            if (dl < best) {
              best = dl;
              face = 2 * i;
            }
            if (du < best) {
              best = du;
              face = 2 * i + 1;
            }
          }
          const int axis = face / 2;
          out[axis] = face % 2 == 0 ? s.lower[axis] : s.upper[axis];
        } else if constexpr (std::is_same_v<T, BallDomain>) {
          double r2 = 0.0;
          for (int i = 0; i < n; ++i) r2 += (p[i] - s.center[i]) * (p[i] - s.center[i]);
          const double r = std::sqrt(r2);
          for (int i = 0; i < n; ++i) {
            if (r == 0.0)
              out[i] = s.center[i] + (i == 0 ? s.radius : 0.0);
            else
              out[i] = s.center[i] + s.radius * (p[i] - s.center[i]) / r;
          }
        } else if constexpr (std::is_same_v<T, EllipsoidDomain>) {
          std::vector<double> x(n), axes(n);
          for (int i = 0; i < n; ++i) {
            x[i] = p[i] - s.center[i];
            axes[i] = s.level * s.b[i];
          }
          const auto y = ellipsoid_closest(x, axes);
          for (int i = 0; i < n; ++i) out[i] = s.center[i] + y[i];
        } else {
          double best = -std::numeric_limits<double>::infinity();
          std::size_t face = 0;
          for (std::size_t k = 0; k < s.normals.size(); ++k) {
            const auto& a = s.normals[k];
            double f = -s.offsets[k];
            for (int i = 0; i < n; ++i) f += a[i] * p[i];
            const double d = f / norm(a);
            if (d > best) {
              best = d;
              face = k;
            }
          }
          const auto& a = s.normals[face];
          double f = -s.offsets[face];
          for (int i = 0; i < n; ++i) f += a[i] * p[i];
          const double a2 = dot(a, a);
          for (int i = 0; i < n; ++i) out[i] = p[i] - f * a[i] / a2;
        }
      },
      shape_);
  return out;
}

Point Domain::nearest_boundary_point(const Point& p) const {
  if (signed_distance(p) < 0.0) return project_to_boundary(p);
  const int n = dim_;
  Point out = p;
  std::visit(
      [&](const auto& s) {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, BoxDomain>) {
          for (int i = 0; i < n; ++i) out[i] = std::clamp(p[i], s.lower[i], s.upper[i]);
        } else if constexpr (std::is_same_v<T, BallDomain> || std::is_same_v<T, EllipsoidDomain>) {
          // both interior formulas also hold from outside
          out = project_to_boundary(p);
        } else {
          // Dykstra's alternating projections onto the half-spaces converge
          // to the nearest point of their intersection.
          const std::size_t m = s.normals.size();
          std::vector<Point> inc(m, Point{});
          Point x = p;
          for (int sweep = 0; sweep < 20000; ++sweep) {
            double moved = 0.0;
            for (std::size_t k = 0; k < m; ++k) {
              Point z = x;
              for (int i = 0; i < n; ++i) z[i] += inc[k][i];
              const auto& a = s.normals[k];
              double f = -s.offsets[k];
              for (int i = 0; i < n; ++i) f += a[i] * z[i];
              Point y = z;
              if (f > 0.0) {
                const double a2 = dot(a, a);
                for (int i = 0; i < n; ++i) y[i] -= f * a[i] / a2;
              }
              for (int i = 0; i < n; ++i) {
                inc[k][i] = z[i] - y[i];
                moved = std::max(moved, std::abs(y[i] - x[i]));
              }
              x = y;
            }
            if (moved <= 1e-15 * (1.0 + diameter_)) break;
          }
          out = x;
        }
      },
      shape_);
  return out;
}

double Domain::level_function(std::span<const double> x) const {
  check_dim(dim_, x.size(), "level_function");
  const int n = dim_;
  return std::visit(
      [&](const auto& s) -> double {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, BoxDomain>) {
          double prod = 1.0;
          for (int i = 0; i < n; ++i) prod *= (s.lower[i] - x[i]) * (x[i] - s.upper[i]);
          return prod;
        } else if constexpr (std::is_same_v<T, BallDomain>) {
          double r2 = 0.0;
          for (int i = 0; i < n; ++i) r2 += (x[i] - s.center[i]) * (x[i] - s.center[i]);
          return r2 - s.radius * s.radius;
        } else if constexpr (std::is_same_v<T, EllipsoidDomain>) {
          double q = 0.0;
          for (int i = 0; i < n; ++i) q += ((x[i] - s.center[i]) / s.b[i]) * ((x[i] - s.center[i]) / s.b[i]);
          return q - s.level * s.level;
        } else {
          double prod = s.normals.size() % 2 == 0 ? 1.0 : -1.0;
          for (std::size_t k = 0; k < s.normals.size(); ++k) prod *= dot(s.normals[k], x) - s.offsets[k];
          return prod;
        }
      },
      shape_);
}

std::vector<std::uint8_t> interior_mask(const Domain& domain, const Grid& grid) {
  if (domain.dim() != grid.dim()) throw DimensionError("interior_mask: domain and grid dimensions differ");
  const double tol = 1e-12 * domain.diameter();
  for (int i = 0; i < grid.dim(); ++i) {
    const double lo = grid.origin(i);
    const double hi = lo + (grid.count(i) - 1) * grid.spacing(i);
    if (domain.bbox_lower()[i] < lo - tol || domain.bbox_upper()[i] > hi + tol)
      throw InvariantError("interior_mask: grid does not cover the domain along axis " + std::to_string(i));
  }
  std::vector<std::uint8_t> mask(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) mask[i] = domain.signed_distance(grid.point(i)) < 0.0 ? 1 : 0;
  return mask;
}

Grid masked_grid(const Domain& domain, const Grid& grid) {
  return grid.with_mask(interior_mask(domain, grid));
}

}  // namespace tibvp
