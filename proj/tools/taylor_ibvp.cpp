// Command-line front end: taylor_ibvp <solve|manufacture|compare|study|bump> --config FILE [options]

#include <cstdio>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "tibvp/driver.hpp"
#include "tibvp/errors.hpp"
#include "tibvp/parallel.hpp"

namespace {

std::vector<double> parse_times(const std::string& list) {
  std::vector<double> out;
  std::stringstream ss(list);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || item.find_first_not_of(" \t", used) != std::string::npos)
      throw tibvp::ConfigError("--snapshots", "cannot read '" + item + "' as a time");
    out.push_back(v);
  }
  if (out.empty()) throw tibvp::ConfigError("--snapshots", "no times given");
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Taylor-series solver for evolution boundary value problems"};
  app.require_subcommand(1, 1);

  std::string config_path, out_dir = ".", snapshots, oracle;
  int order = 0, threads = 0;
  double dt = 0.0;
  bool no_timing = false;

  const std::vector<std::pair<const char*, const char*>> commands{
      {"solve", "series solution, report and snapshot CSVs"},
      {"manufacture", "forcing for a given solution, plus the round-trip check"},
      {"compare", "series solution against a classical time stepper"},
      {"study", "error table over truncation orders and grids"},
      {"bump", "write the cut-off function on the grid"},
  };
  for (const auto& [name, help] : commands) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("--config", config_path, "problem file (JSON)")->required()->check(CLI::ExistingFile);
    sub->add_option("--out", out_dir, "output directory")->capture_default_str();
    sub->add_option("--order", order, "fixed truncation order, overriding the file")->check(CLI::PositiveNumber);
    sub->add_option("--snapshots", snapshots, "comma-separated snapshot times");
    sub->add_option("--oracle", oracle, "oracle scheme: crank_nicolson, theta_method, central_difference_wave, maxwell_leapfrog");
    sub->add_option("--dt", dt, "oracle time step")->check(CLI::PositiveNumber);
    sub->add_option("--threads", threads, "worker threads (default: TAYLOR_IBVP_THREADS or 1)")->check(CLI::PositiveNumber);
    sub->add_flag("--no-timing", no_timing, "write wall_ms = 0 so repeated runs give identical reports");
  }

  CLI11_PARSE(app, argc, argv);
  const std::string cmd = app.get_subcommands().front()->get_name();

  try {
    if (threads > 0) tibvp::set_thread_limit(threads);
    tibvp::Overrides ov;
    if (order > 0) ov.order = order;
    if (!snapshots.empty()) ov.snapshots = parse_times(snapshots);
    if (!oracle.empty()) ov.oracle_scheme = oracle;
    if (dt > 0.0) ov.dt = dt;
    tibvp::RunOptions opt;
    opt.out_dir = out_dir;
    opt.timing = !no_timing;

    const nlohmann::json report = tibvp::run(cmd, tibvp::read_config(config_path), ov, opt);
    std::printf("%s: %s, report written to %s/report.json\n", cmd.c_str(), report["class"].get<std::string>().c_str(),
                out_dir.c_str());
    if (report.contains("order_used")) std::printf("  order used      %d\n", report["order_used"].get<int>());
    if (report.contains("residual_max")) std::printf("  residual        %.3e\n", report["residual_max"].get<double>());
    if (report.contains("roundtrip_error"))
      std::printf("  round trip      %.3e\n", report["roundtrip_error"].get<double>());
    if (report.contains("oracle_errors") && !report["oracle_errors"].empty()) {
      double worst = 0.0;
      for (const auto& row : report["oracle_errors"]) worst = std::max(worst, row["linf"].get<double>());
      std::printf("  oracle max Linf %.3e\n", worst);
    }
    return 0;
  } catch (const tibvp::ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const tibvp::BlowUpError& e) {
    std::fprintf(stderr, "blow-up: %s (last valid order %d)\n", e.what(), e.last_valid_order());
    return 3;
  } catch (const tibvp::SolverError& e) {
    std::fprintf(stderr, "solver error: %s (after %d iterations)\n", e.what(), e.iterations());
    return 4;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}
