#include "tibvp/driver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>

#include "tibvp/errors.hpp"
#include "tibvp/field_io.hpp"
#include "tibvp/stencil.hpp"

namespace tibvp {

using nlohmann::json;

SpatialField Solution::eval(double t) const {
  SpatialField u = series.eval(t);
  if (!lift.empty()) u += series_eval(lift, t);
  return u;
}

Solution solve(const Problem& pb) { return solve(pb, pb.truncation); }

Solution solve(const Problem& pb, const TruncationPolicy& truncation) {
  Solution s;
  s.lift = pb.lift;
  const ContinuationPolicy& c = pb.continuation;
  switch (pb.cls) {
    case ProblemClass::parabolic:
      s.series = march_parabolic(pb.parabolic, pb.f, pb.u0, truncation, c, &s.info);
      break;
    case ProblemClass::parabolic_system:
      s.series = march_system_parabolic(pb.system, pb.f, pb.u0, truncation, c, &s.info);
      break;
    case ProblemClass::parabolic_nonlinear:
      s.series = march_nonlinear_parabolic(pb.parabolic, pb.nonlinear, pb.f, pb.u0, truncation, c, &s.info);
      break;
    case ProblemClass::hyperbolic_system:
      s.series = march_hyperbolic(pb.system, pb.f, pb.u0, pb.u1, truncation, c, &s.info);
      break;
    case ProblemClass::plate:
      s.series = march_plate(*pb.plate, pb.f, pb.u0, pb.u1, truncation, c, &s.info);
      break;
    case ProblemClass::maxwell:
      s.series = march_maxwell(*pb.maxwell, pb.f, pb.g2, pb.u0, pb.u1, truncation, c, &s.info);
      break;
  }
  return s;
}

namespace {

// Tracks max ||r_k|| and the largest norm among the terms that make up r_k.
struct Defect {
  double worst = 0.0;
  double scale = 0.0;
  void add(const SpatialField& r, std::initializer_list<const SpatialField*> terms) {
    worst = std::max(worst, r.max_abs());
    for (const SpatialField* t : terms)
      if (t) scale = std::max(scale, t->max_abs());
  }
  double relative() const { return scale > 0.0 ? worst / scale : worst; }
};

SpatialField slice(const SpatialField& s, int first, int count) {
  SpatialField out(s.grid(), count);
  for (int c = 0; c < count; ++c)
    for (std::size_t p = 0; p < s.grid().size(); ++p) out(c, p) = s(first + c, p);
  return out;
}

double nonlinear_residual(const Problem& pb, const TaylorField& u) {
  const int m = u.order();
  if (m < 1) return 0.0;
  const TaylorField M = apply_M_series(pb.nonlinear, u, m - 1);
  const int op_order = pb.parabolic.order();
  Defect d;
  for (int k = 0; k < m; ++k) {
    const SpatialField lhs = static_cast<double>(k + 1) * u[k + 1];
    SpatialField au(u.grid(), 1);
    for (int j = 0; j <= std::min(k, op_order); ++j) au += apply_A(pb.parabolic, j, u[k - j]);
    const SpatialField lm = pb.nonlinear.lambda * M[k];
    SpatialField r = lhs - au + lm;
    const SpatialField* phi = pb.f.find(k);
    if (phi) r -= *phi;
    d.add(r, {&lhs, &au, &lm, phi});
  }
  return d.relative();
}

double plate_residual(const Problem& pb, const TaylorField& u) {
  const PlateSpec& ps = *pb.plate;
  const int m = u.order();
  if (m < 2) return 0.0;
  const Grid& g = u.grid();
  SpatialField inv(g, 1);
  for (std::size_t p = 0; p < g.size(); ++p)
    if (g.in_mask(p)) inv(0, p) = ps.inv_rho_h[p];
  std::vector<SpatialField> sv;
  for (int j = 0; j < m; ++j) sv.push_back(static_cast<double>(j + 1) * u[j + 1]);
  const TaylorField s(sv);
  const TaylorField q = cauchy_product(cauchy_product(s, s, m - 1), s, m - 1);
  Defect d;
  for (int k = 0; k + 2 <= m; ++k) {
    const SpatialField acc = static_cast<double>((k + 2) * (k + 1)) * u[k + 2];
    const SpatialField stiff = multiply(inv, apply_plate_A(ps, u[k]));
    const SpatialField damp = static_cast<double>(k + 1) * multiply(ps.alpha0, u[k + 1]);
    const SpatialField cubic = multiply(ps.alpha1, q[k]);
    SpatialField r = acc + stiff + damp + cubic;
    const SpatialField* phi = pb.f.find(k);
    if (phi) r -= *phi;
    d.add(r, {&acc, &stiff, &damp, &cubic, phi});
  }
  return d.relative();
}

double maxwell_residual(const Problem& pb, const TaylorField& u) {
  const MaxwellSpec& ms = *pb.maxwell;
  const SpatialField sx = multiply(ms.sigma, ms.xi_hat);
  Defect d;
  for (int k = 0; k < u.order(); ++k) {
    const SpatialField dk = slice(u[k], 0, 3), bk = slice(u[k], 3, 3);
    const SpatialField dd = static_cast<double>(k + 1) * slice(u[k + 1], 0, 3);
    const SpatialField db = static_cast<double>(k + 1) * slice(u[k + 1], 3, 3);
    const SpatialField cb = curl(multiply(ms.mu_hat, bk));
    const SpatialField damp = multiply(sx, dk);
    const SpatialField cd = curl(multiply(ms.xi_hat, dk));
    SpatialField rd = dd - cb + damp;
    SpatialField rb = db + cd;
    const SpatialField* g1 = pb.f.find(k);
    const SpatialField* g2 = pb.g2.find(k);
    if (g1) rd -= *g1;
    if (g2) rb -= *g2;
    d.add(rd, {&dd, &cb, &damp, g1});
    d.add(rb, {&db, &cd, g2});
  }
  return d.relative();
}

json grid_json(const Grid& g) {
  json j;
  j["dim"] = g.dim();
  json pts = json::array(), h = json::array();
  for (int i = 0; i < g.dim(); ++i) {
    pts.push_back(g.count(i));
    h.push_back(g.spacing(i));
  }
  j["points"] = pts;
  j["spacing"] = h;
  j["stencil_order"] = g.stencil_order();
  j["masked_points"] = g.mask_count();
  return j;
}

json radius_json(const RadiusEstimate& r) {
  json j;
  j["value"] = r.determinate ? json(r.radius) : json(nullptr);
  j["determinate"] = r.determinate;
  j["super_geometric"] = r.super_geometric;
  j["note"] = r.note;
  return j;
}

json errors_json(const ErrorTable& t) {
  json rows = json::array();
  for (const auto& r : t.rows) rows.push_back({{"time", r.time}, {"linf", r.linf}, {"l2", r.l2}, {"h1", r.h1}});
  return rows;
}

std::filesystem::path out_path(const RunOptions& opt, const std::string& name) {
  return std::filesystem::path(opt.out_dir) / name;
}

void write_json(const json& j, const std::filesystem::path& p) {
  std::ofstream out(p);
  if (!out) throw Error("cannot write " + p.string());
  out << j.dump(2) << '\n';
}

void write_error_csv(const ErrorTable& t, const std::filesystem::path& p) {
  std::ofstream out(p);
  if (!out) throw Error("cannot write " + p.string());
  out << "time,linf,l2,h1\n";
  char buf[128];
  for (const auto& r : t.rows) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g\n", r.time, r.linf, r.l2, r.h1);
    out << buf;
  }
}

OracleConfig::Scheme default_scheme(ProblemClass c) {
  switch (c) {
    case ProblemClass::hyperbolic_system:
    case ProblemClass::plate: return OracleConfig::Scheme::central_difference_wave;
    case ProblemClass::maxwell: return OracleConfig::Scheme::maxwell_leapfrog;
    default: return OracleConfig::Scheme::crank_nicolson;
  }
}

class Clock {
 public:
  explicit Clock(bool on) : on_(on), t0_(std::chrono::steady_clock::now()) {}
  double ms() const {
    if (!on_) return 0.0;
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0_).count();
  }

 private:
  bool on_;
  std::chrono::steady_clock::time_point t0_;
};

json base_report(const Problem& pb) {
  json r;
  r["class"] = class_name(pb.cls);
  r["grid"] = grid_json(pb.grid);
  r["horizon"] = pb.horizon;
  return r;
}

json solve_command(const Problem& pb, const RunOptions& opt, bool force_oracle) {
  const Clock clock(opt.timing);
  const Solution sol = solve(pb);
  const TaylorField& first = sol.series.pieces.front();

  json r = base_report(pb);
  r["order_used"] = sol.info.max_order_used;
  r["converged"] = sol.info.converged;
  r["pieces"] = sol.info.steps;
  r["radius_estimate"] = radius_json(radius_estimate(first));
  r["coeff_norms"] = first.coefficient_norms();
  r["residual_max"] = residual_max(pb, first);

  json snaps = json::array();
  for (std::size_t i = 0; i < pb.snapshots.size(); ++i) {
    const std::string name = "snapshot_" + std::to_string(i) + ".csv";
    write_csv(sol.eval(pb.snapshots[i]), out_path(opt, name).string());
    snaps.push_back({{"time", pb.snapshots[i]}, {"file", name}});
  }
  r["snapshots"] = snaps;

  r["oracle_errors"] = json::array();
  if (pb.oracle || force_oracle) {
    OracleConfig oc;
    if (pb.oracle) {
      oc = *pb.oracle;
    } else {
      oc.scheme = default_scheme(pb.cls);
      oc.horizon = pb.horizon;
      oc.dt = pb.horizon / 1000.0;
    }
    const ErrorTable table = compare(sol.series, run_oracle(pb, oc));
    r["oracle"] = {{"scheme", scheme_name(oc.scheme)}, {"dt", oc.dt}};
    r["oracle_errors"] = errors_json(table);
    write_error_csv(table, out_path(opt, "errors.csv"));
  }
  r["wall_ms"] = clock.ms();
  return r;
}

json manufacture_command(const Problem& pb, const RunOptions& opt) {
  if (!pb.solution) throw ConfigError("/data/solution", "manufacture needs a target solution");
  const Clock clock(opt.timing);
  const TaylorField& target = *pb.solution;
  const int m = target.order();
  TaylorField f;
  switch (pb.cls) {
    case ProblemClass::parabolic: f = manufacture_rhs(pb.parabolic, target); break;
    case ProblemClass::parabolic_system: f = manufacture_rhs(pb.system, target, false); break;
    case ProblemClass::hyperbolic_system: f = manufacture_rhs(pb.system, target, true); break;
    default: throw ConfigError("/class", std::string("manufacture does not support class ") + class_name(pb.cls));
  }
  for (int k = 0; k <= m; ++k)
    write_csv(target[k], out_path(opt, "solution_" + std::to_string(k) + ".csv").string());
  for (std::size_t k = 0; k < f.size(); ++k)
    write_csv(f[k], out_path(opt, "forcing_" + std::to_string(k) + ".csv").string());

  // forward solve of exactly m orders with the manufactured forcing
  const TruncationPolicy exact = TruncationPolicy::fixed(m, 0.0);
  TaylorField back;
  switch (pb.cls) {
    case ProblemClass::parabolic: back = parabolic_coeffs(pb.parabolic, f, pb.u0, exact); break;
    case ProblemClass::parabolic_system: back = system_parabolic_coeffs(pb.system, f, pb.u0, exact); break;
    default: back = hyperbolic_coeffs(pb.system, f, pb.u0, pb.u1, exact); break;
  }
  double diff = 0.0, scale = 0.0;
  for (int k = 0; k <= m; ++k) {
    diff = std::max(diff, (back[k] - target[k]).max_abs());
    scale = std::max(scale, target[k].max_abs());
  }
  Problem with_f = pb;
  with_f.f = f;

  json r = base_report(pb);
  r["order_used"] = m;
  r["radius_estimate"] = radius_json(radius_estimate(back));
  r["coeff_norms"] = back.coefficient_norms();
  r["residual_max"] = residual_max(with_f, back);
  r["roundtrip_error"] = scale > 0.0 ? diff / scale : diff;
  r["oracle_errors"] = json::array();
  r["forcing_orders"] = f.size();
  r["wall_ms"] = clock.ms();
  return r;
}

json study_command(const json& config, const Problem& base, const Overrides& ov, const RunOptions& opt) {
  const Clock clock(opt.timing);
  std::vector<int> orders = base.study_orders;
  if (orders.empty()) orders = {4, 8, 12, 16};
  std::sort(orders.begin(), orders.end());
  std::vector<int> grids = base.study_grids;
  if (grids.empty()) grids = {0};  // the configured grid

  std::ofstream csv(out_path(opt, "study.csv"));
  if (!csv) throw Error("cannot write study.csv");
  csv << "grid_points,order,max_linf_error,reference,pieces\n";
  json rows = json::array();
  for (int n : grids) {
    Overrides o = ov;
    o.order.reset();
    if (n > 0) o.grid_points = n;
    const Problem pb = build_problem(config, o);
    const TruncationPolicy top = TruncationPolicy::fixed(orders.back(), pb.horizon);
    std::vector<SpatialField> ref;
    std::string ref_name;
    if (pb.oracle) {
      ref = run_oracle(pb, *pb.oracle).fields;
      ref_name = scheme_name(pb.oracle->scheme);
    } else {
      const Solution s = solve(pb, top);
      for (double t : pb.snapshots) ref.push_back(s.series.eval(t));
      ref_name = "order " + std::to_string(orders.back());
    }
    for (int m : orders) {
      const Solution s = solve(pb, TruncationPolicy::fixed(m, pb.horizon));
      double err = 0.0;
      for (std::size_t i = 0; i < pb.snapshots.size(); ++i)
        err = std::max(err, (s.series.eval(pb.snapshots[i]) - ref[i]).max_abs());
      const int pts = pb.grid.count(0);
      char buf[160];
      std::snprintf(buf, sizeof buf, "%d,%d,%.17g,%s,%d\n", pts, m, err, ref_name.c_str(), s.info.steps);
      csv << buf;
      rows.push_back({{"grid_points", pts}, {"order", m}, {"max_linf_error", err}, {"reference", ref_name},
                      {"pieces", s.info.steps}});
    }
  }
  json r = base_report(base);
  r["study"] = rows;
  r["wall_ms"] = clock.ms();
  return r;
}

json bump_command(const Problem& pb, const RunOptions& opt) {
  const Clock clock(opt.timing);
  const SpatialField b = bump(*pb.domain, pb.bump, pb.grid);
  write_csv(b, out_path(opt, "bump.csv").string());
  json r = base_report(pb);
  r["bump_a"] = pb.bump.a;
  r["bump_max"] = b.max_abs();
  r["file"] = "bump.csv";
  r["wall_ms"] = clock.ms();
  return r;
}

}  // namespace

double residual_max(const Problem& pb, const TaylorField& u) {
  const std::vector<double> none;
  switch (pb.cls) {
    case ProblemClass::parabolic: return residual_check(pb.parabolic, u, pb.f, none).coefficient_relative();
    case ProblemClass::parabolic_system: return residual_check(pb.system, u, pb.f, none, false).coefficient_relative();
    case ProblemClass::hyperbolic_system: return residual_check(pb.system, u, pb.f, none, true).coefficient_relative();
    case ProblemClass::parabolic_nonlinear: return nonlinear_residual(pb, u);
    case ProblemClass::plate: return plate_residual(pb, u);
    case ProblemClass::maxwell: return maxwell_residual(pb, u);
  }
  return 0.0;
}

Snapshots run_oracle(const Problem& pb, const OracleConfig& oc) {
  switch (pb.cls) {
    case ProblemClass::parabolic: return step_parabolic(pb.parabolic, pb.f, pb.u0, pb.snapshots, oc);
    case ProblemClass::parabolic_system: return step_parabolic(pb.system, pb.f, pb.u0, pb.snapshots, oc);
    case ProblemClass::parabolic_nonlinear:
      return step_parabolic(pb.parabolic, pb.nonlinear, pb.f, pb.u0, pb.snapshots, oc);
    case ProblemClass::hyperbolic_system: return step_wave(pb.system, pb.f, pb.u0, pb.u1, pb.snapshots, oc);
    case ProblemClass::plate: return step_wave(*pb.plate, pb.f, pb.u0, pb.u1, pb.snapshots, oc);
    case ProblemClass::maxwell: return step_maxwell(*pb.maxwell, pb.f, pb.g2, pb.u0, pb.u1, pb.snapshots, oc);
  }
  return {};
}

json run(const std::string& cmd, const json& config, const Overrides& ov, const RunOptions& opt) {
  if (cmd != "solve" && cmd != "manufacture" && cmd != "compare" && cmd != "study" && cmd != "bump")
    throw ConfigError("subcommand", "unknown subcommand '" + cmd + "'");
  // everything is built and checked before any output is produced
  const Problem pb = build_problem(config, ov);
  std::filesystem::create_directories(opt.out_dir);
  json report;
  if (cmd == "solve") report = solve_command(pb, opt, false);
  else if (cmd == "compare") report = solve_command(pb, opt, true);
  else if (cmd == "manufacture") report = manufacture_command(pb, opt);
  else if (cmd == "study") report = study_command(config, pb, ov, opt);
  else report = bump_command(pb, opt);
  write_json(report, out_path(opt, "report.json"));
  return report;
}

}  // namespace tibvp
