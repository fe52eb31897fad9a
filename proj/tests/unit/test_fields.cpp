#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <vector>

#include "support/test_support.hpp"
#include "tibvp/errors.hpp"
#include "tibvp/stencil.hpp"
#include "tibvp/taylor.hpp"

using namespace tibvp;
using namespace tibvp::testsupport;

namespace {

const double pi = std::acos(-1.0);

// max |a - b| over masked points whose coordinates all lie in [lo, hi]
double max_err_in(const SpatialField& a, const SpatialField& b, double lo, double hi) {
  const Grid& g = a.grid();
  double e = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (!g.in_mask(i)) continue;
    const Point p = g.point(i);
    bool in = true;
    for (int d = 0; d < g.dim(); ++d) in = in && p[d] >= lo && p[d] <= hi;
    if (in) e = std::max(e, std::abs(a(0, i) - b(0, i)));
  }
  return e;
}

TaylorField random_series(const Grid& g, std::mt19937_64& rng, int terms) {
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  std::vector<SpatialField> c;
  for (int k = 0; k < terms; ++k) c.push_back(SpatialField::sample(g, [&](const Point&) { return U(rng); }));
  return TaylorField(std::move(c));
}

}  // namespace

TEST(Grid, Invariants) {
  EXPECT_THROW(box_grid(1, 4), InvariantError);
  EXPECT_THROW(Grid(1, {10, 1, 1}, {0, 0, 0}, {-0.1, 1, 1}), InvariantError);
  EXPECT_THROW(Grid(4, {10, 10, 10}, {0, 0, 0}, {1, 1, 1}), DimensionError);
  const Grid g = box_grid(2, 11);
  EXPECT_EQ(g.size(), 121u);
  EXPECT_EQ(g.index(3, 2), 25u);
  EXPECT_DOUBLE_EQ(g.point(g.index(3, 2))[1], 0.2);
  EXPECT_TRUE(g.compatible(box_grid(2, 11)));
  EXPECT_FALSE(g.compatible(box_grid(2, 11, 0.0, 1.0, 2)));
}

TEST(Diff, ConstantAndLinear) {
  const Grid g = box_grid(1, 41, -1.0, 2.0);
  const SpatialField one = SpatialField::sample(g, [](const Point&) { return 3.0; });
  const SpatialField x = SpatialField::sample(g, [](const Point& p) { return p[0]; });
  // the unmasked grid still reads zeros past its ends, so stay away from them
  const SpatialField ones = SpatialField::sample(g, [](const Point&) { return 1.0; });
  EXPECT_LE(max_err_in(diff(one, 0, 1), SpatialField(g), -0.8, 1.8), 1e-14);
  EXPECT_LE(max_err_in(diff(one, 0, 2), SpatialField(g), -0.8, 1.8), 1e-12);
  EXPECT_LE(max_err_in(diff(x, 0, 1), ones, -0.8, 1.8), 1e-13);
  EXPECT_LE(max_err_in(diff(x, 0, 2), SpatialField(g), -0.8, 1.8), 1e-11);
}

TEST(Diff, FourthOrderRichardson) {
  double err[2];
  for (int level = 0; level < 2; ++level) {
    const Grid g = masked_box_grid(1, level == 0 ? 101 : 201);
    const SpatialField u = SpatialField::sample(g, [](const Point& p) { return std::sin(pi * p[0]); });
    const SpatialField exact = (-pi * pi) * u;
    err[level] = max_err_in(diff(u, 0, 2), exact, 0.1, 0.9);
  }
  const double ratio = err[0] / err[1];
  EXPECT_NEAR(ratio, 16.0, 1.6) << err[0] << " " << err[1];
}

TEST(Diff, SecondOrderStencilIsThreePoint) {
  const Grid g = masked_box_grid(1, 11, 2);
  const SpatialField u = SpatialField::sample(g, [](const Point& p) { return p[0] * p[0] * p[0]; });
  const SpatialField d = diff(u, 0, 2);
  const double h = g.spacing(0);
  for (int i = 1; i < 10; ++i) {
    const double l = i > 1 ? u(0, i - 1) : 0.0, r = i < 9 ? u(0, i + 1) : 0.0;
    EXPECT_NEAR(d(0, i), (l - 2.0 * u(0, i) + r) / (h * h), 1e-9);
  }
}

TEST(Diff, Linearity) {
  std::mt19937_64 rng(3);
  const Grid g = masked_box_grid(2, 31);
  const SpatialField f = smooth_random(g, rng, 0.0, 1.0), q = smooth_random(g, rng, 0.0, 1.0);
  for (int axis = 0; axis < 2; ++axis)
    for (int order = 1; order <= 2; ++order) {
      const SpatialField lhs = diff(2.0 * f - 3.0 * q, axis, order);
      const SpatialField rhs = 2.0 * diff(f, axis, order) - 3.0 * diff(q, axis, order);
      EXPECT_LE(rel_linf(lhs, rhs), 1e-13);
    }
}

TEST(Diff, OutputMaskedLikeInput) {
  std::mt19937_64 rng(5);
  const Grid g = masked_grid(Domain::ball({0.5, 0.5}, 0.4), box_grid(2, 41));
  const SpatialField f = smooth_random(g, rng, 1.0, 1.0);
  const SpatialField d = mixed_diff(f, 0, 1);
  for (std::size_t i = 0; i < g.size(); ++i)
    if (!g.in_mask(i)) {
      ASSERT_EQ(f(0, i), 0.0);
      ASSERT_EQ(d(0, i), 0.0);
    }
}

TEST(MixedDiff, PolynomialAndCommutation) {
  const Grid g = box_grid(2, 41, -1.0, 2.0);
  const SpatialField u = SpatialField::sample(g, [](const Point& p) { return p[0] * p[1]; });
  const SpatialField ones = SpatialField::sample(g, [](const Point&) { return 1.0; });
  EXPECT_LE(max_err_in(mixed_diff(u, 0, 1), ones, -0.7, 1.7), 1e-12);

  std::mt19937_64 rng(9);
  const SpatialField r = smooth_random(masked_box_grid(2, 25), rng, 0.0, 1.0);
  EXPECT_TRUE(bitwise_equal(mixed_diff(r, 0, 1), mixed_diff(r, 1, 0)));
  EXPECT_THROW(mixed_diff(r, 1, 1), InvariantError);
}

TEST(MixedDiff, TrigFourthOrder) {
  double err[2];
  for (int level = 0; level < 2; ++level) {
    const Grid g = box_grid(2, level == 0 ? 41 : 81, 0.0, 2.0);
    const SpatialField u = SpatialField::sample(g, [](const Point& p) { return std::sin(p[0]) * std::cos(p[1]); });
    const SpatialField exact =
        SpatialField::sample(g, [](const Point& p) { return -std::cos(p[0]) * std::sin(p[1]); });
    err[level] = max_err_in(mixed_diff(u, 0, 1), exact, 0.3, 1.7);
  }
  EXPECT_LT(err[0], 1e-5);
  EXPECT_NEAR(err[0] / err[1], 16.0, 2.4);
}

TEST(CauchyProduct, IdentityAndShift) {
  std::mt19937_64 rng(1);
  const Grid g = masked_box_grid(1, 11);
  const SpatialField one = SpatialField::sample(g, [](const Point&) { return 1.0; });
  const SpatialField zero(g);
  const TaylorField b = random_series(g, rng, 6);
  const TaylorField id({one, zero, zero});
  const TaylorField p = cauchy_product(id, b, 4);
  ASSERT_EQ(p.size(), 5u);
  for (int k = 0; k <= 4; ++k) EXPECT_TRUE(bitwise_equal(p[k], b[k]));

  const TaylorField t({zero, one});
  const TaylorField t2 = cauchy_product(t, t, 3);
  EXPECT_EQ(t2[0].max_abs(), 0.0);
  EXPECT_EQ(t2[1].max_abs(), 0.0);
  EXPECT_TRUE(bitwise_equal(t2[2], one));
  EXPECT_EQ(t2[3].max_abs(), 0.0);
}

TEST(CauchyProduct, MatchesPolynomialMultiplication) {
  std::mt19937_64 rng(2);
  const Grid g = masked_box_grid(1, 9);
  const TaylorField a = random_series(g, rng, 5), b = random_series(g, rng, 5);
  const TaylorField p = cauchy_product(a, b, 8);
  for (std::size_t i = 0; i < g.size(); ++i) {
    std::vector<double> brute(9, 0.0);
    for (int x = 0; x < 5; ++x)
      for (int y = 0; y < 5; ++y) brute[x + y] += a[x](0, i) * b[y](0, i);
    for (int k = 0; k <= 8; ++k) EXPECT_NEAR(p[k](0, i), brute[k], 1e-14);
  }
}

TEST(CauchyProduct, CommutativeAssociative) {
  std::mt19937_64 rng(4);
  const Grid g = masked_box_grid(2, 13);
  const TaylorField a = random_series(g, rng, 6), b = random_series(g, rng, 6), c = random_series(g, rng, 6);
  const TaylorField ab = cauchy_product(a, b, 5), ba = cauchy_product(b, a, 5);
  const TaylorField l = cauchy_product(ab, c, 5), r = cauchy_product(a, cauchy_product(b, c, 5), 5);
  for (int k = 0; k <= 5; ++k) {
    EXPECT_LE(rel_linf(ab[k], ba[k]), 1e-13);
    EXPECT_LE(rel_linf(l[k], r[k]), 1e-13);
  }
}

TEST(CauchyProduct, ScalarTimesVector) {
  std::mt19937_64 rng(6);
  const Grid g = masked_box_grid(1, 9);
  const TaylorField s = random_series(g, rng, 3);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  std::vector<SpatialField> vc;
  for (int k = 0; k < 3; ++k) vc.push_back(SpatialField::sample(g, 2, [&](const Point&, int) { return U(rng); }));
  const TaylorField v(vc);
  const TaylorField p = cauchy_product(s, v, 2);
  EXPECT_EQ(p.components(), 2);
  const SpatialField expect = multiply(s[0], v[1]) + multiply(s[1], v[0]);
  EXPECT_LE(rel_linf(p[1], expect), 1e-15);
  EXPECT_THROW(cauchy_product(s, TaylorField({SpatialField(masked_box_grid(1, 11))}), 1), DimensionError);
}

TEST(SeriesEval, BasicIdentities) {
  std::mt19937_64 rng(8);
  const Grid g = masked_box_grid(1, 21);
  const TaylorField u = random_series(g, rng, 10);
  EXPECT_TRUE(bitwise_equal(series_eval(u, 0.0), u[0]));
  const TaylorField two({u[0], u[1]});
  EXPECT_LE(rel_linf(series_eval(two, 1.0), u[0] + u[1]), 1e-16);

  const double t = 0.3;
  SpatialField rev(g);
  for (int k = 9; k >= 0; --k) rev.axpy(std::pow(t, k), u[k]);
  EXPECT_LE(rel_linf(series_eval(u, t), rev), 1e-14);

  // linear in the coefficients
  const TaylorField v = random_series(g, rng, 10);
  std::vector<SpatialField> w;
  for (int k = 0; k < 10; ++k) w.push_back(2.0 * u[k] - v[k]);
  EXPECT_LE(rel_linf(series_eval(TaylorField(w), t), 2.0 * series_eval(u, t) - series_eval(v, t)), 1e-14);
}

TEST(SeriesEval, DerivativeShiftTruncate) {
  std::mt19937_64 rng(10);
  const Grid g = masked_box_grid(1, 11);
  const TaylorField u = random_series(g, rng, 7);
  SpatialField d(g);
  for (int k = 1; k < 7; ++k) d.axpy(k * std::pow(0.4, k - 1), u[k]);
  EXPECT_LE(rel_linf(series_eval_derivative(u, 0.4), d), 1e-14);

  const TaylorField s = shift_series(u, 0.25);
  for (double x : {0.0, 0.1, 0.3}) EXPECT_LE(rel_linf(series_eval(s, x), series_eval(u, 0.25 + x)), 1e-14);

  const TaylorField tr = truncate_series(u, 2);
  EXPECT_EQ(tr.order(), 2);
  EXPECT_TRUE(bitwise_equal(tr[2], u[2]));
}

TEST(Norms, Values) {
  const Grid g = box_grid(1, 11);
  const FieldNorms z = norms(SpatialField(g));
  EXPECT_EQ(z.linf, 0.0);
  EXPECT_EQ(z.l2, 0.0);
  EXPECT_EQ(z.h1_seminorm, 0.0);

  // cell-centred points so the point count times the cell volume is the box volume
  const Grid cells(2, {10, 20, 1}, {0.05, 0.05, 0.0}, {0.1, 0.1, 1.0});
  const FieldNorms one = norms(SpatialField::sample(cells, [](const Point&) { return 1.0; }));
  EXPECT_NEAR(one.l2, std::sqrt(2.0), 1e-14);
  EXPECT_EQ(one.linf, 1.0);

  const Grid fine(1, {2000, 1, 1}, {0.00025, 0.0, 0.0}, {0.0005, 1.0, 1.0});
  const FieldNorms x = norms(SpatialField::sample(fine, [](const Point& p) { return p[0]; }));
  EXPECT_NEAR(x.l2, 1.0 / std::sqrt(3.0), 1e-3);
}

TEST(GaussianSmooth, PreservesConstantsAwayFromEdges) {
  const Grid g = masked_box_grid(1, 101);
  const SpatialField one = SpatialField::sample(g, [](const Point&) { return 1.0; });
  const SpatialField s = gaussian_smooth(one, 0.02);
  // renormalized over masked points, so a constant stays constant everywhere
  EXPECT_LE((s - one).max_abs(), 1e-14);
  EXPECT_THROW(gaussian_smooth(one, 0.0), InvariantError);
}
