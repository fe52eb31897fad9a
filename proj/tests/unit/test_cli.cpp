#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "support/test_support.hpp"
#include "tibvp/driver.hpp"
#include "tibvp/errors.hpp"
#include "tibvp/field_io.hpp"

using namespace tibvp;
using namespace tibvp::testsupport;
using nlohmann::json;

namespace {

json heat_1d() {
  return json::parse(R"js({
    "class": "parabolic",
    "domain": {"type": "box", "lower": [0], "upper": [1]},
    "grid": {"points": 41},
    "bump": {"a": 0.1},
    "horizon": 0.001,
    "truncation": {"mode": "fixed", "order": 8}
  })js");
}

std::string scratch(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / ("tibvp_cli_" + name);
  std::filesystem::remove_all(dir);
  return dir.string();
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string config_error_path(const json& cfg) {
  try {
    build_problem(cfg);
  } catch (const ConfigError& e) {
    return e.path();
  }
  return "(no error)";
}

}  // namespace

TEST(Config, ZeroDataSolveGivesZeroSnapshots) {
  RunOptions opt{scratch("zero"), false};
  const json r = run("solve", heat_1d(), {}, opt);
  EXPECT_EQ(r["class"], "parabolic");
  EXPECT_EQ(r["residual_max"].get<double>(), 0.0);
  ASSERT_EQ(r["snapshots"].size(), 5u);
  const Problem pb = build_problem(heat_1d());
  for (const auto& s : r["snapshots"]) {
    const SpatialField u = read_csv(pb.grid, 1, (std::filesystem::path(opt.out_dir) / s["file"].get<std::string>()).string());
    EXPECT_EQ(u.max_abs(), 0.0);
  }
  for (const char* key : {"class", "grid", "order_used", "radius_estimate", "coeff_norms", "residual_max",
                          "oracle_errors", "wall_ms"})
    EXPECT_TRUE(r.contains(key)) << key;
}

TEST(Config, ManufactureRoundTrip) {
  json cfg = heat_1d();
  cfg["grid"]["points"] = 81;
  cfg["operator"] = json::parse(R"js({"diffusion": [["1 + 0.5*sin(x1)"]], "drift": ["x1"],
                                     "reaction": {"coefficients": ["1", "0.3"]}, "ellipticity": 0.5})js");
  cfg["data"] = {{"solution", "cos(2*x1)*exp(-t) + t^2*x1"}};
  cfg["truncation"] = {{"mode", "fixed"}, {"order", 12}};
  const json r = run("manufacture", cfg, {}, RunOptions{scratch("man"), false});
  EXPECT_LE(r["roundtrip_error"].get<double>(), 1e-12);
  EXPECT_EQ(r["order_used"], 12);
  EXPECT_EQ(r["forcing_orders"], 12);
}

TEST(Config, ManufactureRoundTripSystem) {
  json cfg = heat_1d();
  cfg["class"] = "hyperbolic_system";
  cfg["operator"] = json::parse(R"js({"components": 2, "g": [{"index": [0, 1], "value": "x1"}]})js");
  cfg["data"] = {{"solution", {"sin(t + x1)", "t^3"}}};
  const json r = run("manufacture", cfg, {}, RunOptions{scratch("man2"), false});
  EXPECT_LE(r["roundtrip_error"].get<double>(), 1e-12);
}

TEST(Config, DeterministicReports) {
  json cfg = heat_1d();
  cfg["data"] = {{"u0", "sin(3*x1)"}, {"f", "t*x1"}};
  cfg["oracle"] = {{"dt", 1e-5}};
  const RunOptions a{scratch("det_a"), false}, b{scratch("det_b"), false};
  run("solve", cfg, {}, a);
  run("solve", cfg, {}, b);
  for (const auto& e : std::filesystem::directory_iterator(a.out_dir)) {
    const auto other = std::filesystem::path(b.out_dir) / e.path().filename();
    EXPECT_EQ(slurp(e.path()), slurp(other)) << e.path().filename();
  }
}

TEST(Config, OverridesApply) {
  Overrides ov;
  ov.order = 5;
  ov.snapshots = std::vector<double>{0.0, 0.0005};
  ov.oracle_scheme = "theta_method";
  ov.dt = 1e-6;
  ov.grid_points = 21;
  const Problem pb = build_problem(heat_1d(), ov);
  EXPECT_EQ(pb.truncation.mode, TruncationPolicy::Mode::fixed);
  EXPECT_EQ(pb.truncation.order, 5);
  EXPECT_EQ(pb.snapshots.size(), 2u);
  ASSERT_TRUE(pb.oracle.has_value());
  EXPECT_EQ(pb.oracle->scheme, OracleConfig::Scheme::theta_method);
  EXPECT_EQ(pb.oracle->dt, 1e-6);
  EXPECT_EQ(pb.grid.count(0), 21);
}

TEST(Config, ErrorsCarryPaths) {
  json c = heat_1d();
  c.erase("horizon");
  EXPECT_EQ(config_error_path(c), "/horizon");

  c = heat_1d();
  c["class"] = "elliptic";
  EXPECT_EQ(config_error_path(c), "/class");

  c = heat_1d();
  c["grid"]["stencil_order"] = 3;
  EXPECT_EQ(config_error_path(c), "/grid/stencil_order");

  c = heat_1d();
  c["operator"] = {{"diffusion", {{"1 + * x1"}}}};
  EXPECT_EQ(config_error_path(c), "/operator/diffusion/0/0");

  c = heat_1d();
  c["operator"] = {{"reaction", "x2"}};
  EXPECT_EQ(config_error_path(c), "/operator/reaction");

  c = heat_1d();
  c["operator"] = {{"reaction", {{"coefficients", {"1", "t"}}}}};
  EXPECT_EQ(config_error_path(c), "/operator/reaction/coefficients/1");

  c = heat_1d();
  c["data"] = {{"u1", "1"}};
  EXPECT_EQ(config_error_path(c), "/data/u1");

  c = heat_1d();
  c["data"] = {{"u0", "1"}, {"u_b", "2"}};
  EXPECT_EQ(config_error_path(c), "/data/u_b");

  c = heat_1d();
  c["snapshots"] = {0.0, 0.002};
  EXPECT_EQ(config_error_path(c), "/snapshots/1");

  c = heat_1d();
  c["truncation"] = {{"mode", "fixed"}, {"order", 0}};
  EXPECT_EQ(config_error_path(c), "/truncation");

  c = heat_1d();
  c["bump"]["a"] = 0.4;
  EXPECT_EQ(config_error_path(c), "/bump");

  c = heat_1d();
  c["class"] = "parabolic_system";
  c["operator"] = json::parse(R"js({"components": 2, "b": [{"index": [0, 2, 0], "value": "1"}]})js");
  EXPECT_EQ(config_error_path(c), "/operator/b/0/index/1");

  c = heat_1d();
  c["class"] = "maxwell";
  EXPECT_EQ(config_error_path(c), "/domain");

  c = heat_1d();
  c["oracle"] = {{"scheme", "central_difference_wave"}};
  EXPECT_EQ(config_error_path(c), "/oracle/scheme");

  c = heat_1d();
  c["horizon"] = "soon";
  EXPECT_EQ(config_error_path(c), "/horizon");

  c = heat_1d();
  c["colour"] = "blue";
  EXPECT_EQ(config_error_path(c), "/colour");

  EXPECT_THROW(run("integrate", heat_1d(), {}, RunOptions{scratch("bad"), false}), ConfigError);
}

TEST(Config, BoundaryDataSolve) {
  // u_b = 1 + x1 is harmonic and linear data is exact for central stencils,
  // so with the lift continued past the mask u stays at 1 + x1 to roundoff
  json cfg = heat_1d();
  cfg["grid"]["points"] = 81;
  cfg["data"] = {{"u0", "1 + x1"}, {"u_b", "1 + x1"}};
  cfg["truncation"] = {{"mode", "adaptive"}, {"tolerance", 1e-13}};
  cfg["continuation"] = true;
  const Problem pb = build_problem(cfg);
  EXPECT_FALSE(pb.lift.empty());
  const Solution s = solve(pb);
  const SpatialField exact = SpatialField::sample(pb.grid, [](const Point& x) { return 1.0 + x[0]; });
  EXPECT_LE(rel_linf(s.eval(0.0), exact), 1e-14);
  EXPECT_LE(rel_linf(s.eval(pb.horizon), exact), 1e-12);
}

TEST(Config, EveryClassBuildsAndSolves) {
  const std::vector<std::string> files{"heat_2d", "zero", "lift_1d", "wave_system", "nonlinear", "plate", "maxwell"};
  for (const auto& name : files) {
    const std::string path = std::string(TIBVP_CONFIG_DIR) + "/" + name + ".json";
    Overrides ov;
    ov.order = 6;
    const Problem pb = load_problem(path, ov);
    const Solution s = solve(pb);
    EXPECT_LE(residual_max(pb, s.series.pieces.front()), 1e-12) << name;
  }
}

TEST(Config, StudyAndBump) {
  json cfg = heat_1d();
  cfg["data"] = {{"u0", "sin(3*x1)"}};
  cfg["continuation"] = true;
  cfg["study"] = {{"orders", {2, 4, 8}}};
  const json r = run("study", cfg, {}, RunOptions{scratch("study"), false});
  ASSERT_EQ(r["study"].size(), 3u);
  const double e2 = r["study"][0]["max_linf_error"], e4 = r["study"][1]["max_linf_error"];
  EXPECT_LT(e4, e2);
  EXPECT_EQ(r["study"][2]["max_linf_error"].get<double>(), 0.0);

  const json b = run("bump", heat_1d(), {}, RunOptions{scratch("bump"), false});
  EXPECT_EQ(b["bump_max"].get<double>(), 1.0);
}
