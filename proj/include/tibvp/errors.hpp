#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace tibvp {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Mismatched dimensions, component counts or grids.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// A declared invariant of an input type does not hold.
class InvariantError : public Error {
 public:
  using Error::Error;
};

/// A coefficient recurrence produced non-finite or runaway coefficients.
class BlowUpError : public Error {
 public:
  BlowUpError(const std::string& what, int last_valid_order)
      : Error(what), last_valid_order_(last_valid_order) {}
  int last_valid_order() const noexcept { return last_valid_order_; }

 private:
  int last_valid_order_;
};

/// An iterative linear solver failed to reach its tolerance.
class SolverError : public Error {
 public:
  SolverError(const std::string& what, int iterations)
      : Error(what), iterations_(iterations) {}
  int iterations() const noexcept { return iterations_; }

 private:
  int iterations_;
};

/// Expression syntax or evaluation error; offset is a byte position into the source.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t offset)
      : Error(what + " at offset " + std::to_string(offset)), offset_(offset) {}
  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

/// Invalid problem configuration; path points into the config tree (e.g. "/operator/diffusion/0/0").
class ConfigError : public Error {
 public:
  ConfigError(const std::string& path, const std::string& what)
      : Error(path + ": " + what), path_(path) {}
  const std::string& path() const noexcept { return path_; }

 private:
  std::string path_;
};

/// Initial and boundary data disagree on the boundary at t = 0.
class CompatibilityError : public Error {
 public:
  using Error::Error;
};

}  // namespace tibvp
