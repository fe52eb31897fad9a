#pragma once

#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "tibvp/grid.hpp"

namespace tibvp {

/// Where an expression may be used: the spatial dimension bounds the
/// allowed x variables, and t is only accepted for time-dependent data.
struct ExprContext {
  int dim = 3;
  bool allow_t = true;
};

struct ExprNode {
  enum class Kind { constant, variable, negate, add, sub, mul, div, pow, call };
  enum class Func { sin, cos, exp, sqrt, abs };

  Kind kind = Kind::constant;
  double value = 0.0;  // constant
  int var = 0;         // variable: 0..2 for x1..x3, 3 for t
  Func func = Func::sin;
  std::vector<std::shared_ptr<const ExprNode>> args;
};

bool operator==(const ExprNode& a, const ExprNode& b);

/// Parsed arithmetic expression over x1, x2, x3 and t.
///
/// Grammar, loosest binding first: + and - (left associative), * and /
/// (left associative), unary minus, ^ (right associative). Functions are
/// sin, cos, exp, sqrt and abs of one argument; pi is a constant.
class Expression {
 public:
  Expression() = default;
  explicit Expression(std::shared_ptr<const ExprNode> root, std::string source = {});

  static Expression constant(double v);

  const ExprNode& root() const { return *root_; }
  bool empty() const noexcept { return !root_; }
  const std::string& source() const noexcept { return source_; }

  double eval(const Point& x, double t = 0.0) const;
  /// Normalized Taylor coefficients in t about t0: entry k is (1/k!) d^k/dt^k.
  std::vector<double> taylor(const Point& x, int order, double t0 = 0.0) const;
  bool depends_on_t() const;
  /// True when the expression is the literal constant 0.
  bool is_zero() const;

  /// Fully parenthesized text that parses back to the same tree.
  std::string to_string() const;

 private:
  std::shared_ptr<const ExprNode> root_;
  std::string source_;
};

/// Throws ParseError carrying the byte offset of the problem.
Expression parse_expression(std::string_view text, const ExprContext& ctx = {});

}  // namespace tibvp
