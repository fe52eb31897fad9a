#pragma once

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "tibvp/dataprep.hpp"
#include "tibvp/geometry.hpp"
#include "tibvp/operators.hpp"
#include "tibvp/oracle.hpp"
#include "tibvp/recurrence.hpp"

namespace tibvp {

enum class ProblemClass { parabolic, parabolic_system, parabolic_nonlinear, hyperbolic_system, plate, maxwell };

const char* class_name(ProblemClass c);
ProblemClass parse_class(const std::string& name);

/// Values that the command line may override after the file is read.
struct Overrides {
  std::optional<int> order;                     // forces a fixed truncation order
  std::optional<std::vector<double>> snapshots;
  std::optional<std::string> oracle_scheme;
  std::optional<double> dt;
  std::optional<int> grid_points;               // same count on every axis (used by study)
};

/// A problem with every field built and validated; nothing here is parsed
/// lazily, so a Problem that exists can be solved.
struct Problem {
  ProblemClass cls = ProblemClass::parabolic;
  std::optional<Domain> domain;
  Grid grid;
  BumpParams bump;
  double horizon = 1.0;
  TruncationPolicy truncation;
  ContinuationPolicy continuation;
  std::optional<OracleConfig> oracle;
  std::vector<double> snapshots;
  int components = 1;
  int series_order = 24;  // t-expansion order of time-dependent data

  ParabolicScalarSpec parabolic;
  DivFormSystemSpec system;
  NonlinearTermsSpec nonlinear;
  std::optional<PlateSpec> plate;
  std::optional<MaxwellSpec> maxwell;

  // Data for the homogeneous problem the solver sees. For maxwell, u0/u1 are
  // D0/B0 and f/g2 are G1/G2.
  TaylorField f, g2;
  SpatialField u0, u1;
  TaylorField lift;  // w; empty without boundary data

  // Normalized t-coefficients of a target solution (manufacture only).
  std::optional<TaylorField> solution;

  std::vector<int> study_orders;
  std::vector<int> study_grids;

  bool second_order_in_time() const noexcept {
    return cls == ProblemClass::hyperbolic_system || cls == ProblemClass::plate;
  }
};

/// Builds a Problem from the JSON tree. Every error, including invariant
/// breaches detected by the library, is reported as a ConfigError whose path
/// points at the offending entry.
Problem build_problem(const nlohmann::json& config, const Overrides& overrides = {});
Problem load_problem(const std::string& path, const Overrides& overrides = {});

nlohmann::json read_config(const std::string& path);

}  // namespace tibvp
