#pragma once

#include <string>
#include <vector>

#include "json.hpp"
#include "tibvp/config.hpp"

namespace tibvp {

/// Series solution of a built problem. eval adds the boundary lift back, so
/// it returns the solution of the original (inhomogeneous) problem.
struct Solution {
  PiecewiseSeries series;  // the homogenized unknown; stacked (D, B) for maxwell
  TaylorField lift;
  MarchInfo info;

  SpatialField eval(double t) const;
};

Solution solve(const Problem& problem);
Solution solve(const Problem& problem, const TruncationPolicy& truncation);

/// Relative coefficient residual of the first series piece: the largest
/// coefficient-identity defect divided by the largest term entering it.
double residual_max(const Problem& problem, const TaylorField& first_piece);

/// Classical time stepping of the homogenized problem at the snapshot times.
Snapshots run_oracle(const Problem& problem, const OracleConfig& config);

struct RunOptions {
  std::string out_dir = ".";
  bool timing = true;  // false writes wall_ms = 0 so reports compare bitwise
};

/// Runs one of solve, manufacture, compare, study or bump and writes its
/// artifacts into options.out_dir. Returns the report that was written to
/// report.json.
nlohmann::json run(const std::string& subcommand, const nlohmann::json& config, const Overrides& overrides,
                   const RunOptions& options);

}  // namespace tibvp
