#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <vector>

#include "support/test_support.hpp"
#include "tibvp/errors.hpp"
#include "tibvp/geometry.hpp"

using namespace tibvp;
using namespace tibvp::testsupport;

namespace {

using Vec = std::vector<double>;

Domain unit_square_polytope() {
  return Domain::polytope({{-1.0, 0.0}, {1.0, 0.0}, {0.0, -1.0}, {0.0, 1.0}}, {0.0, 1.0, 0.0, 1.0});
}

double dist(const Vec& a, const Vec& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(s);
}

Vec as_vec(const Point& p) { return {p[0], p[1]}; }

}  // namespace

TEST(Geometry, BoxMidpoint) {
  const Domain d = Domain::box({0.0}, {1.0});
  EXPECT_DOUBLE_EQ(d.signed_distance(Vec{0.5}), -0.5);
  EXPECT_DOUBLE_EQ(d.signed_distance(Vec{0.0}), 0.0);
  EXPECT_DOUBLE_EQ(d.signed_distance(Vec{1.5}), 0.5);
}

TEST(Geometry, BallRadial) {
  const Domain d = Domain::ball({0.0, 0.0}, 1.0);
  EXPECT_DOUBLE_EQ(d.signed_distance(Vec{2.0, 0.0}), 1.0);
  EXPECT_DOUBLE_EQ(d.signed_distance(Vec{0.0, 0.0}), -1.0);
}

TEST(Geometry, PolytopeDistanceMatchesBoundarySampling) {
  const Domain d = unit_square_polytope();
  const Vec p{0.3, 0.5};
  double brute = 1e300;
  const int n = 4000;
  for (int i = 0; i <= n; ++i) {
    const double s = static_cast<double>(i) / n;
    for (const Vec& q : {Vec{s, 0.0}, Vec{s, 1.0}, Vec{0.0, s}, Vec{1.0, s}}) brute = std::min(brute, dist(p, q));
  }
  EXPECT_NEAR(d.signed_distance(p), -0.3, 1e-15);
  EXPECT_NEAR(-d.signed_distance(p), brute, 1e-12);
}

TEST(Geometry, Projections) {
  const Domain box = Domain::box({0.0, 0.0}, {1.0, 1.0});
  const Vec pb = box.project_to_boundary(Vec{0.1, 0.5});
  EXPECT_DOUBLE_EQ(pb[0], 0.0);
  EXPECT_DOUBLE_EQ(pb[1], 0.5);

  const Domain ball = Domain::ball({0.0, 0.0}, 1.0);
  const Vec pr = ball.project_to_boundary(Vec{0.5, 0.0});
  EXPECT_NEAR(pr[0], 1.0, 1e-15);
  EXPECT_NEAR(pr[1], 0.0, 1e-15);

  // all four faces are equally far from the centre; face 0 is x1 = 0
  const Domain sq = unit_square_polytope();
  const Vec c{0.5, 0.5};
  const Vec pc = sq.project_to_boundary(c);
  EXPECT_DOUBLE_EQ(pc[0], 0.0);
  EXPECT_DOUBLE_EQ(pc[1], 0.5);
  for (const Vec& q : {Vec{1.0, 0.5}, Vec{0.5, 0.0}, Vec{0.5, 1.0}}) EXPECT_DOUBLE_EQ(dist(c, q), dist(c, pc));
}

TEST(Geometry, ProjectionRejectsExteriorPoints) {
  const Domain d = Domain::ball({0.0, 0.0}, 1.0);
  EXPECT_THROW(d.project_to_boundary(Vec{2.0, 0.0}), InvariantError);
  EXPECT_THROW(d.signed_distance(Vec{0.0, 0.0, 0.0}), DimensionError);
}

TEST(Geometry, ShapeValidation) {
  EXPECT_THROW(Domain::box({1.0}, {0.0}), InvariantError);
  EXPECT_THROW(Domain::ellipsoid({0.0, 0.0}, {1.0, -1.0}, 1.0), InvariantError);
  // x < 0 and -x < -1 cannot both hold
  EXPECT_THROW(Domain::polytope({{1.0}, {-1.0}}, {0.0, -1.0}), InvariantError);
  EXPECT_THROW(Domain::polytope({{1.0, 0.0}, {-1.0, 0.0}}, {1.0, 1.0}), InvariantError);
}

TEST(Geometry, InteriorMaskBox) {
  const Domain d = Domain::box({0.0}, {1.0});
  const Grid g = box_grid(1, 11);
  const auto m = interior_mask(d, g);
  EXPECT_EQ(m.front(), 0);
  EXPECT_EQ(m.back(), 0);
  int count = 0;
  for (auto v : m) count += v;
  EXPECT_EQ(count, 9);
}

TEST(Geometry, InteriorMaskBallCorner) {
  const Domain d = Domain::ball({0.0, 0.0}, 1.0);
  const Grid g = box_grid(2, 21, -1.0, 1.0);
  const auto m = interior_mask(d, g);
  EXPECT_EQ(m[g.index(0, 0)], 0);
  EXPECT_EQ(m[g.index(10, 10)], 1);
}

TEST(Geometry, InteriorMaskPolytopeCount) {
  const Domain d = unit_square_polytope();
  const Grid g = box_grid(2, 41, -0.5, 1.5);
  const auto m = interior_mask(d, g);
  std::size_t brute = 0, count = 0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    const Point p = g.point(i);
    brute += (-p[0] < 0.0 && p[0] - 1.0 < 0.0 && -p[1] < 0.0 && p[1] - 1.0 < 0.0);
    count += m[i];
  }
  EXPECT_EQ(count, brute);
  EXPECT_EQ(masked_grid(d, g).mask_count(), brute);
}

TEST(Geometry, ProjectionDistanceIdentityAndLipschitz) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  const std::vector<Domain> domains{
      Domain::ball({0.0, 0.0, 0.0}, 1.0),
      Domain::ellipsoid({0.0, 0.0, 0.0}, {1.0, 0.6, 0.3}, 1.0),
      Domain::polytope({{1, 1, 1}, {-1, 0, 0}, {0, -1, 0}, {0, 0, -1}}, {1, 0, 0, 0}),
      Domain::box({-1, -1, -1}, {1, 1, 1}),
  };
  for (const Domain& d : domains) {
    int inside = 0;
    Vec prev{0.0, 0.0, 0.0};
    double prev_sd = d.signed_distance(prev);
    for (int i = 0; i < 4000; ++i) {
      const Vec p{U(rng), U(rng), U(rng)};
      const double sd = d.signed_distance(p);
      EXPECT_LE(std::abs(sd - prev_sd), dist(p, prev) + 1e-12) << d.kind();
      prev = p;
      prev_sd = sd;
      if (!(sd < 0.0)) continue;
      ++inside;
      const Vec q = d.project_to_boundary(p);
      EXPECT_NEAR(dist(p, q) + sd, 0.0, 1e-10 * std::max(1.0, -sd)) << d.kind();
      EXPECT_NEAR(d.signed_distance(q), 0.0, 1e-12 * d.diameter()) << d.kind();
    }
    EXPECT_GT(inside, 50) << d.kind();
  }
}

TEST(Geometry, LevelFunctionSigns) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> U(-1.5, 1.5);
  const Domain ball = Domain::ball({0.0, 0.0}, 1.0);
  const Domain poly = Domain::polytope({{1, 1}, {-1, 0}, {0, -1}}, {1, 0, 0});
  int checked = 0;
  for (int i = 0; i < 2000; ++i) {
    const Vec p{U(rng), U(rng)};
    // ball: positive outside
    EXPECT_EQ(ball.level_function(p) > 0.0, ball.signed_distance(p) > 0.0);
    // The signed face product is also positive where an even number of faces
    // are violated, so the polytope test keeps to points breaking at most one.
    const int broken = (p[0] + p[1] > 1.0) + (p[0] < 0.0) + (p[1] < 0.0);
    if (broken > 1) continue;
    ++checked;
    EXPECT_EQ(poly.level_function(p) > 0.0, poly.signed_distance(p) < 0.0);
  }
  EXPECT_GT(checked, 1000);
}

TEST(Geometry, InradiusOfBox) {
  const Domain d = Domain::box({0.0, 0.0}, {1.0, 2.0});
  EXPECT_DOUBLE_EQ(d.inradius(), 0.5);
}

TEST(Geometry, NearestBoundaryPointFromOutside) {
  const Domain box = Domain::box({0.0, 0.0}, {1.0, 2.0});
  const Point q = box.nearest_boundary_point(Point{1.5, -0.25, 0.0});
  EXPECT_DOUBLE_EQ(q[0], 1.0);
  EXPECT_DOUBLE_EQ(q[1], 0.0);

  const Domain ball = Domain::ball({0.0, 0.0}, 1.0);
  const Point r = ball.nearest_boundary_point(Point{3.0, 4.0, 0.0});
  EXPECT_NEAR(r[0], 0.6, 1e-15);
  EXPECT_NEAR(r[1], 0.8, 1e-15);

  // brute force over a fine boundary sampling
  const Domain ell = Domain::ellipsoid({0.0, 0.0}, {2.0, 1.0}, 1.0);
  const Domain tri = Domain::polytope({{-1.0, 0.0}, {0.0, -1.0}, {1.0, 1.0}}, {0.0, 0.0, 1.0});
  const int n = 200000;
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  for (int trial = 0; trial < 20; ++trial) {
    const Vec p{u(rng), u(rng)};
    if (ell.signed_distance(p) > 0.0) {
      double brute = 1e300;
      for (int i = 0; i < n; ++i) {
        const double th = 2.0 * M_PI * i / n;
        brute = std::min(brute, dist(p, Vec{2.0 * std::cos(th), std::sin(th)}));
      }
      EXPECT_NEAR(dist(p, as_vec(ell.nearest_boundary_point(Point{p[0], p[1], 0.0}))), brute, 1e-8) << p[0] << " " << p[1];
    }
    if (tri.signed_distance(p) > 0.0) {
      double brute = 1e300;
      for (int i = 0; i <= n; ++i) {
        const double s = static_cast<double>(i) / n;
        for (const Vec& b : {Vec{s, 0.0}, Vec{0.0, s}, Vec{s, 1.0 - s}}) brute = std::min(brute, dist(p, b));
      }
      const Vec q = as_vec(tri.nearest_boundary_point(Point{p[0], p[1], 0.0}));
      EXPECT_NEAR(dist(p, q), brute, 1e-9) << p[0] << " " << p[1];
      EXPECT_NEAR(tri.signed_distance(q), 0.0, 1e-12);
    }
  }
}
