#include "tibvp/expression.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <string>

#include "tibvp/errors.hpp"

namespace tibvp {

using Node = ExprNode;
using NodePtr = std::shared_ptr<const ExprNode>;

bool operator==(const ExprNode& a, const ExprNode& b) {
  if (a.kind != b.kind || a.args.size() != b.args.size()) return false;
  switch (a.kind) {
    case Node::Kind::constant:
      if (a.value != b.value) return false;
      break;
    case Node::Kind::variable:
      if (a.var != b.var) return false;
      break;
    case Node::Kind::call:
      if (a.func != b.func) return false;
      break;
    default:
      break;
  }
  for (std::size_t i = 0; i < a.args.size(); ++i)
    if (!(*a.args[i] == *b.args[i])) return false;
  return true;
}

namespace {

NodePtr make(Node::Kind kind, std::vector<NodePtr> args) {
  auto n = std::make_shared<Node>();
  n->kind = kind;
  n->args = std::move(args);
  return n;
}

NodePtr make_constant(double v) {
  auto n = std::make_shared<Node>();
  n->kind = Node::Kind::constant;
  n->value = v;
  return n;
}

class Parser {
 public:
  Parser(std::string_view s, const ExprContext& ctx) : s_(s), ctx_(ctx) {}

  NodePtr parse() {
    NodePtr e = expr();
    skip();
    if (pos_ != s_.size()) throw ParseError("unexpected '" + std::string(1, s_[pos_]) + "'", pos_);
    return e;
  }

 private:
  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  NodePtr expr() {
    NodePtr lhs = term();
    while (true) {
      if (accept('+'))
        lhs = make(Node::Kind::add, {lhs, term()});
      else if (accept('-'))
        lhs = make(Node::Kind::sub, {lhs, term()});
      else
        return lhs;
    }
  }

  NodePtr term() {
    NodePtr lhs = unary();
    while (true) {
      if (accept('*'))
        lhs = make(Node::Kind::mul, {lhs, unary()});
      else if (accept('/'))
        lhs = make(Node::Kind::div, {lhs, unary()});
      else
        return lhs;
    }
  }

  NodePtr unary() {
    if (accept('-')) return make(Node::Kind::negate, {unary()});
    return power();
  }

  NodePtr power() {
    NodePtr base = primary();
    if (accept('^')) return make(Node::Kind::pow, {base, exponent()});
    return base;
  }

  NodePtr exponent() {
    if (accept('-')) return make(Node::Kind::negate, {exponent()});
    return power();
  }

  NodePtr primary() {
    skip();
    if (pos_ >= s_.size()) throw ParseError("unexpected end of expression", pos_);
    const char c = s_[pos_];
    if (c == '(') {
      ++pos_;
      NodePtr e = expr();
      if (!accept(')')) throw ParseError("expected ')'", pos_);
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return identifier();
    throw ParseError("unexpected '" + std::string(1, c) + "'", pos_);
  }

  NodePtr number() {
    const std::size_t start = pos_;
    while (pos_ < s_.size() && (std::isdigit(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '.')) ++pos_;
    if (pos_ < s_.size() && (s_[pos_] == 'e' || s_[pos_] == 'E')) {
      std::size_t p = pos_ + 1;
      if (p < s_.size() && (s_[p] == '+' || s_[p] == '-')) ++p;
      if (p < s_.size() && std::isdigit(static_cast<unsigned char>(s_[p]))) {
        pos_ = p;
        while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      }
    }
    double v = 0.0;
    const auto res = std::from_chars(s_.data() + start, s_.data() + pos_, v);
    if (res.ec != std::errc() || res.ptr != s_.data() + pos_) throw ParseError("malformed number", start);
    return make_constant(v);
  }

  NodePtr identifier() {
    const std::size_t start = pos_;
    while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) ++pos_;
    const std::string_view name = s_.substr(start, pos_ - start);

    static const struct {
      const char* name;
      Node::Func func;
    } funcs[] = {{"sin", Node::Func::sin}, {"cos", Node::Func::cos}, {"exp", Node::Func::exp},
                 {"sqrt", Node::Func::sqrt}, {"abs", Node::Func::abs}};
    for (const auto& f : funcs) {
      if (name != f.name) continue;
      if (!accept('(')) throw ParseError("function '" + std::string(name) + "' needs an argument list", pos_);
      std::vector<NodePtr> args;
      if (!accept(')')) {
        args.push_back(expr());
        while (accept(',')) args.push_back(expr());
        if (!accept(')')) throw ParseError("expected ')'", pos_);
      }
      if (args.size() != 1)
        throw ParseError("function '" + std::string(name) + "' takes 1 argument, got " + std::to_string(args.size()),
                         start);
      auto n = std::make_shared<Node>();
      n->kind = Node::Kind::call;
      n->func = f.func;
      n->args = std::move(args);
      return n;
    }
    if (name == "pi") return make_constant(std::numbers::pi);

    int var = -1;
    if (name == "t") {
      if (!ctx_.allow_t) throw ParseError("t is not allowed in a time-independent quantity", start);
      var = 3;
    } else if (name.size() == 2 && name[0] == 'x' && name[1] >= '1' && name[1] <= '3') {
      var = name[1] - '1';
      if (var >= ctx_.dim)
        throw ParseError("variable " + std::string(name) + " exceeds dimension " + std::to_string(ctx_.dim), start);
    }
    if (var < 0) throw ParseError("unknown identifier '" + std::string(name) + "'", start);
    auto n = std::make_shared<Node>();
    n->kind = Node::Kind::variable;
    n->var = var;
    return n;
  }

  std::string_view s_;
  ExprContext ctx_;
  std::size_t pos_ = 0;
};

double eval_node(const Node& n, const Point& x, double t) {
  switch (n.kind) {
    case Node::Kind::constant: return n.value;
    case Node::Kind::variable: return n.var == 3 ? t : x[n.var];
    case Node::Kind::negate: return -eval_node(*n.args[0], x, t);
    case Node::Kind::add: return eval_node(*n.args[0], x, t) + eval_node(*n.args[1], x, t);
    case Node::Kind::sub: return eval_node(*n.args[0], x, t) - eval_node(*n.args[1], x, t);
    case Node::Kind::mul: return eval_node(*n.args[0], x, t) * eval_node(*n.args[1], x, t);
    case Node::Kind::div: return eval_node(*n.args[0], x, t) / eval_node(*n.args[1], x, t);
    case Node::Kind::pow: return std::pow(eval_node(*n.args[0], x, t), eval_node(*n.args[1], x, t));
    case Node::Kind::call: {
      const double a = eval_node(*n.args[0], x, t);
      switch (n.func) {
        case Node::Func::sin: return std::sin(a);
        case Node::Func::cos: return std::cos(a);
        case Node::Func::exp: return std::exp(a);
        case Node::Func::sqrt: return std::sqrt(a);
        case Node::Func::abs: return std::abs(a);
      }
    }
  }
  return 0.0;
}

// Truncated Taylor arithmetic on normalized coefficient vectors of equal length.
using Jet = std::vector<double>;

bool is_constant(const Jet& a) {
  for (std::size_t k = 1; k < a.size(); ++k)
    if (a[k] != 0.0) return false;
  return true;
}

Jet jet_mul(const Jet& a, const Jet& b) {
  Jet c(a.size(), 0.0);
  for (std::size_t k = 0; k < a.size(); ++k)
    for (std::size_t j = 0; j <= k; ++j) c[k] += a[j] * b[k - j];
  return c;
}

Jet jet_div(const Jet& a, const Jet& b) {
  Jet q(a.size(), 0.0);
  for (std::size_t k = 0; k < a.size(); ++k) {
    double s = a[k];
    for (std::size_t j = 1; j <= k; ++j) s -= b[j] * q[k - j];
    q[k] = s / b[0];
  }
  return q;
}

Jet jet_exp(const Jet& a) {
  Jet e(a.size(), 0.0);
  e[0] = std::exp(a[0]);
  for (std::size_t k = 1; k < a.size(); ++k) {
    double s = 0.0;
    for (std::size_t j = 1; j <= k; ++j) s += static_cast<double>(j) * a[j] * e[k - j];
    e[k] = s / static_cast<double>(k);
  }
  return e;
}

Jet jet_log(const Jet& a) {
  Jet l(a.size(), 0.0);
  l[0] = std::log(a[0]);
  for (std::size_t k = 1; k < a.size(); ++k) {
    double s = 0.0;
    for (std::size_t j = 1; j < k; ++j) s += static_cast<double>(j) * l[j] * a[k - j];
    l[k] = (a[k] - s / static_cast<double>(k)) / a[0];
  }
  return l;
}

void jet_sincos(const Jet& a, Jet& s, Jet& c) {
  s.assign(a.size(), 0.0);
  c.assign(a.size(), 0.0);
  s[0] = std::sin(a[0]);
  c[0] = std::cos(a[0]);
  for (std::size_t k = 1; k < a.size(); ++k) {
    double ss = 0.0, cc = 0.0;
    for (std::size_t j = 1; j <= k; ++j) {
      ss += static_cast<double>(j) * a[j] * c[k - j];
      cc += static_cast<double>(j) * a[j] * s[k - j];
    }
    s[k] = ss / static_cast<double>(k);
    c[k] = -cc / static_cast<double>(k);
  }
}

Jet jet_sqrt(const Jet& a) {
  Jet r(a.size(), 0.0);
  r[0] = std::sqrt(a[0]);
  for (std::size_t k = 1; k < a.size(); ++k) {
    double s = a[k];
    for (std::size_t j = 1; j < k; ++j) s -= r[j] * r[k - j];
    r[k] = s / (2.0 * r[0]);
  }
  return r;
}

Jet jet_pow(const Jet& a, const Jet& b) {
  if (is_constant(b)) {
    const double p = b[0];
    if (p == std::floor(p) && p >= 0.0 && p <= 64.0) {
      Jet r(a.size(), 0.0);
      r[0] = 1.0;
      for (int i = 0; i < static_cast<int>(p); ++i) r = jet_mul(r, a);
      return r;
    }
    if (is_constant(a)) {
      Jet r(a.size(), 0.0);
      r[0] = std::pow(a[0], p);
      return r;
    }
    // y = a^p: k a0 y_k = sum_{j=1}^k (p j - (k - j)) a_j y_{k-j}
    Jet y(a.size(), 0.0);
    y[0] = std::pow(a[0], p);
    for (std::size_t k = 1; k < a.size(); ++k) {
      double s = 0.0;
      for (std::size_t j = 1; j <= k; ++j)
        s += (p * static_cast<double>(j) - static_cast<double>(k - j)) * a[j] * y[k - j];
      y[k] = s / (static_cast<double>(k) * a[0]);
    }
    return y;
  }
  return jet_exp(jet_mul(b, jet_log(a)));
}

Jet eval_jet(const Node& n, const Point& x, double t0, std::size_t len) {
  auto arg = [&](int i) { return eval_jet(*n.args[i], x, t0, len); };
  switch (n.kind) {
    case Node::Kind::constant: {
      Jet j(len, 0.0);
      j[0] = n.value;
      return j;
    }
    case Node::Kind::variable: {
      Jet j(len, 0.0);
      if (n.var == 3) {
        j[0] = t0;
        if (len > 1) j[1] = 1.0;
      } else {
        j[0] = x[n.var];
      }
      return j;
    }
    case Node::Kind::negate: {
      Jet a = arg(0);
      for (double& v : a) v = -v;
      return a;
    }
    case Node::Kind::add:
    case Node::Kind::sub: {
      Jet a = arg(0);
      const Jet b = arg(1);
      const double s = n.kind == Node::Kind::add ? 1.0 : -1.0;
      for (std::size_t k = 0; k < len; ++k) a[k] += s * b[k];
      return a;
    }
    case Node::Kind::mul: return jet_mul(arg(0), arg(1));
    case Node::Kind::div: return jet_div(arg(0), arg(1));
    case Node::Kind::pow: return jet_pow(arg(0), arg(1));
    case Node::Kind::call: {
      const Jet a = arg(0);
      switch (n.func) {
        case Node::Func::sin:
        case Node::Func::cos: {
          Jet s, c;
          jet_sincos(a, s, c);
          return n.func == Node::Func::sin ? s : c;
        }
        case Node::Func::exp: return jet_exp(a);
        case Node::Func::sqrt: return jet_sqrt(a);
        case Node::Func::abs: {
          double sign = 0.0;
          for (double v : a)
            if (v != 0.0) {
              sign = v > 0.0 ? 1.0 : -1.0;
              break;
            }
          Jet r = a;
          for (double& v : r) v *= sign;
          return r;
        }
      }
    }
  }
  return Jet(len, 0.0);
}

bool depends_t(const Node& n) {
  if (n.kind == Node::Kind::variable) return n.var == 3;
  for (const auto& a : n.args)
    if (depends_t(*a)) return true;
  return false;
}

void print(const Node& n, std::string& out) {
  switch (n.kind) {
    case Node::Kind::constant: {
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.17g", n.value);
      out += buf;
      return;
    }
    case Node::Kind::variable:
      out += n.var == 3 ? std::string("t") : "x" + std::to_string(n.var + 1);
      return;
    case Node::Kind::negate:
      out += "(-";
      print(*n.args[0], out);
      out += ")";
      return;
    case Node::Kind::call: {
      static const char* names[] = {"sin", "cos", "exp", "sqrt", "abs"};
      out += names[static_cast<int>(n.func)];
      out += "(";
      print(*n.args[0], out);
      out += ")";
      return;
    }
    default: {
      const char op = n.kind == Node::Kind::add   ? '+'
                      : n.kind == Node::Kind::sub ? '-'
                      : n.kind == Node::Kind::mul ? '*'
                      : n.kind == Node::Kind::div ? '/'
                                                  : '^';
      out += "(";
      print(*n.args[0], out);
      out += ' ';
      out += op;
      out += ' ';
      print(*n.args[1], out);
      out += ")";
    }
  }
}

}  // namespace

Expression::Expression(std::shared_ptr<const ExprNode> root, std::string source)
    : root_(std::move(root)), source_(std::move(source)) {}

Expression Expression::constant(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return Expression(make_constant(v), buf);
}

double Expression::eval(const Point& x, double t) const {
  if (!root_) return 0.0;
  return eval_node(*root_, x, t);
}

std::vector<double> Expression::taylor(const Point& x, int order, double t0) const {
  const std::size_t len = static_cast<std::size_t>(std::max(order, 0)) + 1;
  if (!root_) return std::vector<double>(len, 0.0);
  return eval_jet(*root_, x, t0, len);
}

bool Expression::depends_on_t() const { return root_ && depends_t(*root_); }

bool Expression::is_zero() const {
  return !root_ || (root_->kind == ExprNode::Kind::constant && root_->value == 0.0);
}

std::string Expression::to_string() const {
  std::string out;
  if (root_) print(*root_, out);
  return out;
}

Expression parse_expression(std::string_view text, const ExprContext& ctx) {
  Parser p(text, ctx);
  return Expression(p.parse(), std::string(text));
}

}  // namespace tibvp
