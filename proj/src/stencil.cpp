#include "tibvp/stencil.hpp"

#include <cmath>
#include <string>
#include <vector>

#include "tibvp/errors.hpp"
#include "tibvp/parallel.hpp"

namespace tibvp {

namespace {

void check_axis(const Grid& g, int axis, const char* where) {
  if (axis < 0 || axis >= g.dim())
    throw DimensionError(std::string(where) + ": axis " + std::to_string(axis) + " out of range");
}

// Walks the points of one axis line; knows how far the stencil may reach
// without leaving the grid or the mask.
struct Line {
  const std::vector<std::uint8_t>& mask;
  std::size_t stride;
  int count;

  int coord(std::size_t idx) const { return static_cast<int>((idx / stride) % count); }

  // True when every point idx + o*stride, o in [-reach, reach], is in the mask.
  bool clear(std::size_t idx, int i, int reach) const {
    if (i - reach < 0 || i + reach >= count) return false;
    for (int o = 1; o <= reach; ++o)
      if (!mask[idx - o * stride] || !mask[idx + o * stride]) return false;
    return true;
  }
};

inline double at(std::span<const double> v, const Line& line, std::size_t idx, int i, int off) {
  const int j = i + off;
  if (j < 0 || j >= line.count) return 0.0;
  return v[static_cast<std::size_t>(static_cast<long>(idx) + static_cast<long>(off) * static_cast<long>(line.stride))];
}

inline bool in_mask_at(const Line& line, std::size_t idx, int i, int off) {
  const int j = i + off;
  if (j < 0 || j >= line.count) return false;
  return line.mask[static_cast<std::size_t>(static_cast<long>(idx) + static_cast<long>(off) * static_cast<long>(line.stride))] != 0;
}

}  // namespace

SpatialField diff(const SpatialField& field, int axis, int order) {
  const Grid& g = field.grid();
  check_axis(g, axis, "diff");
  if (order != 1 && order != 2) throw InvariantError("diff: derivative order must be 1 or 2");
  SpatialField out(g, field.components());
  const Line line{g.mask(), g.stride(axis), g.count(axis)};
  const double h = g.spacing(axis);
  const bool fourth = g.stencil_order() == 4;
  const std::size_t n = g.size();

  for (int c = 0; c < field.components(); ++c) {
    const auto v = field.component(c);
    auto o = out.component(c);
    parallel_for(n, [&](std::size_t begin, std::size_t end) {
      for (std::size_t idx = begin; idx < end; ++idx) {
        if (!line.mask[idx]) continue;
        const int i = line.coord(idx);
        const double um1 = at(v, line, idx, i, -1);
        const double up1 = at(v, line, idx, i, 1);
        if (fourth && line.clear(idx, i, 2)) {
          const double um2 = v[idx - 2 * line.stride];
          const double up2 = v[idx + 2 * line.stride];
          if (order == 1)
            o[idx] = (um2 - 8.0 * um1 + 8.0 * up1 - up2) / (12.0 * h);
          else
            o[idx] = (-um2 + 16.0 * um1 - 30.0 * v[idx] + 16.0 * up1 - up2) / (12.0 * h * h);
        } else {
          if (order == 1)
            o[idx] = (up1 - um1) / (2.0 * h);
          else
            o[idx] = ((up1 - v[idx]) - (v[idx] - um1)) / (h * h);
        }
      }
    });
  }
  return out;
}

SpatialField mixed_diff(const SpatialField& field, int i, int j) {
  if (i == j) throw InvariantError("mixed_diff: axes must differ");
  const int lo = std::min(i, j);
  const int hi = std::max(i, j);
  return diff(diff(field, lo, 1), hi, 1);
}

SpatialField conservative_second(const SpatialField& coef, const SpatialField& u, int axis) {
  const Grid& g = u.grid();
  check_axis(g, axis, "conservative_second");
  require_same_grid(coef, u, "conservative_second");
  if (coef.components() != 1) throw DimensionError("conservative_second: coefficient must be scalar");
  SpatialField out(g, u.components());
  const Line line{g.mask(), g.stride(axis), g.count(axis)};
  const double h = g.spacing(axis);
  const bool fourth = g.stencil_order() == 4;
  const auto a = coef.component(0);

  // Second-order face coefficient between idx and idx + off; a masked-out
  // neighbour contributes the in-mask value.
  auto face2 = [&](std::size_t idx, int i, int off) {
    if (!in_mask_at(line, idx, i, off)) return a[idx];
    return 0.5 * (a[idx] + at(a, line, idx, i, off));
  };

  for (int c = 0; c < u.components(); ++c) {
    const auto v = u.component(c);
    auto o = out.component(c);
    parallel_for(g.size(), [&](std::size_t begin, std::size_t end) {
      for (std::size_t idx = begin; idx < end; ++idx) {
        if (!line.mask[idx]) continue;
        const int i = line.coord(idx);
        if (fourth && line.clear(idx, i, 3)) {
          const long s = static_cast<long>(line.stride);
          auto val = [&](std::span<const double> f, int off) { return f[static_cast<std::size_t>(static_cast<long>(idx) + off * s)]; };
          // Flux on the face between off and off + 1.
          auto flux = [&](int off) {
            const double af = (-val(a, off - 1) + 9.0 * val(a, off) + 9.0 * val(a, off + 1) - val(a, off + 2)) / 16.0;
            const double du = (val(v, off - 1) - 27.0 * val(v, off) + 27.0 * val(v, off + 1) - val(v, off + 2)) / (24.0 * h);
            return af * du;
          };
          o[idx] = (flux(-2) - 27.0 * flux(-1) + 27.0 * flux(0) - flux(1)) / (24.0 * h);
        } else {
          const double up = at(v, line, idx, i, 1);
          const double um = at(v, line, idx, i, -1);
          const double right = face2(idx, i, 1) * (up - v[idx]);
          const double left = face2(idx, i, -1) * (v[idx] - um);
          o[idx] = (right - left) / (h * h);
        }
      }
    });
  }
  return out;
}

FieldNorms norms(const SpatialField& field) {
  FieldNorms r;
  const Grid& g = field.grid();
  const double vol = g.cell_volume();
  double l2 = 0.0;
  for (int c = 0; c < field.components(); ++c) {
    const auto v = field.component(c);
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (!g.in_mask(i)) continue;
      r.linf = std::max(r.linf, std::abs(v[i]));
      l2 += v[i] * v[i];
    }
  }
  r.l2 = std::sqrt(l2 * vol);
  double h1 = 0.0;
  for (int axis = 0; axis < g.dim(); ++axis) {
    const auto d = diff(field, axis, 1);
    for (double x : d.values()) h1 += x * x;
  }
  r.h1_seminorm = std::sqrt(h1 * vol);
  return r;
}

SpatialField gaussian_smooth(const SpatialField& field, double width) {
  if (!(width > 0.0)) throw InvariantError("gaussian_smooth: width must be positive");
  SpatialField cur = field;
  const Grid& g = field.grid();
  for (int axis = 0; axis < g.dim(); ++axis) {
    const Line line{g.mask(), g.stride(axis), g.count(axis)};
    const double h = g.spacing(axis);
    const int reach = static_cast<int>(std::floor(3.0 * width / h));
    std::vector<double> w(static_cast<std::size_t>(reach) + 1);
    for (int o = 0; o <= reach; ++o) w[o] = std::exp(-0.5 * (o * h / width) * (o * h / width));
    SpatialField next(g, field.components());
    for (int c = 0; c < field.components(); ++c) {
      const auto v = cur.component(c);
      auto out = next.component(c);
      for (std::size_t idx = 0; idx < g.size(); ++idx) {
        if (!line.mask[idx]) continue;
        const int i = line.coord(idx);
        double num = 0.0, den = 0.0;
        for (int o = -reach; o <= reach; ++o) {
          if (!in_mask_at(line, idx, i, o)) continue;
          const double wo = w[std::abs(o)];
          num += wo * at(v, line, idx, i, o);
          den += wo;
        }
        out[idx] = num / den;
      }
    }
    cur = std::move(next);
  }
  return cur;
}

double first_derivative_bound(const Grid& grid, int axis) {
  const double h = grid.spacing(axis);
  return grid.stencil_order() == 4 ? 1.5 / h : 1.0 / h;
}

double second_derivative_bound(const Grid& grid, int axis) {
  const double h = grid.spacing(axis);
  return grid.stencil_order() == 4 ? 16.0 / (3.0 * h * h) : 4.0 / (h * h);
}

double conservative_second_bound(const Grid& grid, int axis) {
  const double h = grid.spacing(axis);
  if (grid.stencil_order() == 2) return 4.0 / (h * h);
  const double d = 56.0 / (24.0 * h);
  return d * d * 1.25;
}

}  // namespace tibvp
