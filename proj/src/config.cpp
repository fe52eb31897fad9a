#include "tibvp/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <limits>
#include <set>

#include "tibvp/errors.hpp"

namespace tibvp {

using nlohmann::json;

const char* class_name(ProblemClass c) {
  switch (c) {
    case ProblemClass::parabolic: return "parabolic";
    case ProblemClass::parabolic_system: return "parabolic_system";
    case ProblemClass::parabolic_nonlinear: return "parabolic_nonlinear";
    case ProblemClass::hyperbolic_system: return "hyperbolic_system";
    case ProblemClass::plate: return "plate";
    case ProblemClass::maxwell: return "maxwell";
  }
  return "?";
}

ProblemClass parse_class(const std::string& name) {
  for (auto c : {ProblemClass::parabolic, ProblemClass::parabolic_system, ProblemClass::parabolic_nonlinear,
                 ProblemClass::hyperbolic_system, ProblemClass::plate, ProblemClass::maxwell})
    if (name == class_name(c)) return c;
  throw ConfigError("/class", "unknown problem class '" + name + "'");
}

namespace {

std::string join(const std::string& path, const std::string& key) { return path + "/" + key; }
std::string join(const std::string& path, std::size_t i) { return path + "/" + std::to_string(i); }

// Library errors raised while building a section are re-raised with the
// section's path so the user can find the entry.
template <class F>
auto at_path(const std::string& path, F&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    throw ConfigError(path, e.what());
  }
}

void allow_keys(const json& obj, const std::string& path, std::initializer_list<const char*> keys) {
  if (!obj.is_object()) throw ConfigError(path, "expected an object");
  const std::set<std::string> known(keys.begin(), keys.end());
  for (const auto& [k, v] : obj.items())
    if (!known.count(k)) throw ConfigError(join(path, k), "unknown key");
}

const json* find(const json& obj, const char* key) {
  const auto it = obj.find(key);
  return it == obj.end() ? nullptr : &*it;
}

const json& need(const json& obj, const std::string& path, const char* key) {
  const json* v = find(obj, key);
  if (!v) throw ConfigError(join(path, key), "missing required field");
  return *v;
}

double number(const json& v, const std::string& path) {
  if (!v.is_number()) throw ConfigError(path, "expected a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) throw ConfigError(path, "expected a finite number");
  return x;
}

double number_or(const json& obj, const std::string& path, const char* key, double fallback) {
  const json* v = find(obj, key);
  return v ? number(*v, join(path, key)) : fallback;
}

int integer(const json& v, const std::string& path) {
  if (!v.is_number_integer()) throw ConfigError(path, "expected an integer");
  return v.get<int>();
}

int integer_or(const json& obj, const std::string& path, const char* key, int fallback) {
  const json* v = find(obj, key);
  return v ? integer(*v, join(path, key)) : fallback;
}

bool boolean_or(const json& obj, const std::string& path, const char* key, bool fallback) {
  const json* v = find(obj, key);
  if (!v) return fallback;
  if (!v->is_boolean()) throw ConfigError(join(path, key), "expected true or false");
  return v->get<bool>();
}

std::string text(const json& v, const std::string& path) {
  if (!v.is_string()) throw ConfigError(path, "expected a string");
  return v.get<std::string>();
}

std::vector<double> numbers(const json& v, const std::string& path, std::size_t want = 0) {
  if (!v.is_array()) throw ConfigError(path, "expected an array of numbers");
  if (want && v.size() != want) throw ConfigError(path, "expected " + std::to_string(want) + " entries");
  std::vector<double> out;
  for (std::size_t i = 0; i < v.size(); ++i) out.push_back(number(v[i], join(path, i)));
  return out;
}

Expression expression(const json& v, const std::string& path, int dim, bool allow_t) {
  std::string s;
  if (v.is_number()) s = v.dump();
  else s = text(v, path);
  try {
    return parse_expression(s, {dim, allow_t});
  } catch (const ParseError& e) {
    throw ConfigError(path, e.what());
  }
}

// A series value is an expression in x and t, expanded in t on demand, or
// {"coefficients": [...]} with one expression in x per normalized t-order.
BoundaryData series(const json& v, const std::string& path, int dim) {
  BoundaryData s;
  if (v.is_object()) {
    allow_keys(v, path, {"coefficients"});
    const std::string cp = join(path, "coefficients");
    const json& list = need(v, path, "coefficients");
    if (!list.is_array() || list.empty()) throw ConfigError(cp, "expected a nonempty array of expressions");
    for (std::size_t k = 0; k < list.size(); ++k) s.coefficients.push_back(expression(list[k], join(cp, k), dim, false));
  } else {
    s.expr = expression(v, path, dim, true);
  }
  return s;
}

// Per-component values: a bare value is accepted when there is one component.
std::vector<json> per_component(const json& v, const std::string& path, int n, std::vector<std::string>& paths) {
  std::vector<json> out;
  if (v.is_array()) {
    if (static_cast<int>(v.size()) != n)
      throw ConfigError(path, "expected " + std::to_string(n) + " component entries, got " + std::to_string(v.size()));
    for (std::size_t i = 0; i < v.size(); ++i) {
      out.push_back(v[i]);
      paths.push_back(join(path, i));
    }
  } else {
    if (n != 1) throw ConfigError(path, "expected an array of " + std::to_string(n) + " component entries");
    out.push_back(v);
    paths.push_back(path);
  }
  return out;
}

TaylorField sample_series(const BoundaryData& s, const Grid& g, int order, const std::string& path) {
  if (s.is_zero()) return TaylorField();
  const int m = s.expr.empty() ? static_cast<int>(s.coefficients.size()) - 1 : (s.depends_on_t() ? order : 0);
  std::vector<SpatialField> c(m + 1, SpatialField(g, 1));
  at_path(path, [&] {
    for (std::size_t p = 0; p < g.size(); ++p) {
      if (!g.in_mask(p)) continue;
      const auto v = s.taylor(g.point(p), m);
      for (int k = 0; k <= m; ++k) c[k](0, p) = v[k];
    }
    return 0;
  });
  return TaylorField(std::move(c));
}

TaylorField compact_series(TaylorField s, const SpatialField& bump) {
  std::vector<SpatialField> c;
  for (const auto& ck : s.coefficients()) c.push_back(multiply(bump, ck));
  return TaylorField(std::move(c));
}

// Stacks scalar series into one N-component series, padding with zeros.
TaylorField stack_series(const std::vector<TaylorField>& parts, const Grid& g) {
  std::size_t len = 0;
  for (const auto& p : parts) len = std::max(len, p.size());
  if (len == 0) return TaylorField();
  const int n = static_cast<int>(parts.size());
  std::vector<SpatialField> c(len, SpatialField(g, n));
  for (int i = 0; i < n; ++i)
    for (std::size_t k = 0; k < parts[i].size(); ++k) {
      const SpatialField& src = parts[i][k];
      for (std::size_t p = 0; p < g.size(); ++p) c[k](i, p) = src(0, p);
    }
  return TaylorField(std::move(c));
}

SpatialField stack_fields(const std::vector<SpatialField>& parts, const Grid& g) {
  SpatialField out(g, static_cast<int>(parts.size()));
  for (std::size_t i = 0; i < parts.size(); ++i)
    for (std::size_t p = 0; p < g.size(); ++p) out(static_cast<int>(i), p) = parts[i](0, p);
  return out;
}

Domain build_domain(const json& d, const std::string& path) {
  const std::string type = text(need(d, path, "type"), join(path, "type"));
  return at_path(path, [&]() -> Domain {
    if (type == "box") {
      allow_keys(d, path, {"type", "lower", "upper"});
      return Domain::box(numbers(need(d, path, "lower"), join(path, "lower")),
                         numbers(need(d, path, "upper"), join(path, "upper")));
    }
    if (type == "ball") {
      allow_keys(d, path, {"type", "center", "radius"});
      return Domain::ball(numbers(need(d, path, "center"), join(path, "center")),
                          number(need(d, path, "radius"), join(path, "radius")));
    }
    if (type == "ellipsoid") {
      allow_keys(d, path, {"type", "center", "axes", "level"});
      return Domain::ellipsoid(numbers(need(d, path, "center"), join(path, "center")),
                               numbers(need(d, path, "axes"), join(path, "axes")),
                               number_or(d, path, "level", 1.0));
    }
    if (type == "polytope") {
      allow_keys(d, path, {"type", "normals", "offsets"});
      const std::string np = join(path, "normals");
      const json& nv = need(d, path, "normals");
      if (!nv.is_array()) throw ConfigError(np, "expected an array of normal vectors");
      std::vector<std::vector<double>> normals;
      for (std::size_t i = 0; i < nv.size(); ++i) normals.push_back(numbers(nv[i], join(np, i)));
      return Domain::polytope(std::move(normals), numbers(need(d, path, "offsets"), join(path, "offsets")));
    }
    throw ConfigError(join(path, "type"), "unknown domain type '" + type + "'");
  });
}

Grid build_grid(const json& gj, const std::string& path, const Domain& domain, const Overrides& ov) {
  allow_keys(gj, path, {"points", "stencil_order", "lower", "upper"});
  const int dim = domain.dim();
  std::vector<int> counts;
  if (ov.grid_points) {
    counts.assign(dim, *ov.grid_points);
  } else {
    const json& pts = need(gj, path, "points");
    const std::string pp = join(path, "points");
    if (pts.is_array()) {
      if (static_cast<int>(pts.size()) != dim) throw ConfigError(pp, "expected one count per axis");
      for (std::size_t i = 0; i < pts.size(); ++i) counts.push_back(integer(pts[i], join(pp, i)));
    } else {
      counts.assign(dim, integer(pts, pp));
    }
  }
  for (int c : counts)
    if (c < 3) throw ConfigError(join(path, "points"), "every axis needs at least 3 points");
  const int order = integer_or(gj, path, "stencil_order", 4);
  if (order != 2 && order != 4) throw ConfigError(join(path, "stencil_order"), "stencil order must be 2 or 4");
  std::vector<double> lo(domain.bbox_lower().begin(), domain.bbox_lower().end());
  std::vector<double> hi(domain.bbox_upper().begin(), domain.bbox_upper().end());
  if (const json* v = find(gj, "lower")) lo = numbers(*v, join(path, "lower"), dim);
  if (const json* v = find(gj, "upper")) hi = numbers(*v, join(path, "upper"), dim);
  return at_path(path, [&] {
    Grid g = masked_grid(domain, Grid::uniform(lo, hi, counts, order));
    std::size_t inside = 0;
    for (std::size_t p = 0; p < g.size(); ++p) inside += g.in_mask(p);
    if (inside == 0) throw ConfigError(path, "no grid point lies inside the domain");
    return g;
  });
}

TruncationPolicy build_truncation(const json* tj, const std::string& path, double horizon, const Overrides& ov) {
  TruncationPolicy t = TruncationPolicy::adaptive(1e-12, horizon);
  if (tj) {
    allow_keys(*tj, path, {"mode", "order", "tolerance", "max_order"});
    const std::string mode = find(*tj, "mode") ? text((*tj)["mode"], join(path, "mode")) : "adaptive";
    if (mode == "fixed") {
      t = TruncationPolicy::fixed(integer(need(*tj, path, "order"), join(path, "order")), horizon);
    } else if (mode == "adaptive") {
      t = TruncationPolicy::adaptive(number_or(*tj, path, "tolerance", 1e-12), horizon,
                                     integer_or(*tj, path, "max_order", 400));
    } else {
      throw ConfigError(join(path, "mode"), "expected 'fixed' or 'adaptive'");
    }
  }
  if (ov.order) t = TruncationPolicy::fixed(*ov.order, horizon);
  at_path(path, [&] {
    t.validate();
    return 0;
  });
  return t;
}

ContinuationPolicy build_continuation(const json* cj, const std::string& path) {
  ContinuationPolicy c;
  if (!cj) return c;
  if (cj->is_boolean()) {
    c.enabled = cj->get<bool>();
    return c;
  }
  allow_keys(*cj, path, {"enabled", "step_fraction", "max_steps"});
  c.enabled = boolean_or(*cj, path, "enabled", true);
  c.step_fraction = number_or(*cj, path, "step_fraction", 1.0);
  c.max_steps = integer_or(*cj, path, "max_steps", c.max_steps);
  if (!(c.step_fraction > 0.0)) throw ConfigError(join(path, "step_fraction"), "must be positive");
  if (c.max_steps < 1) throw ConfigError(join(path, "max_steps"), "must be positive");
  return c;
}

std::optional<OracleConfig> build_oracle(const json* oj, const std::string& path, ProblemClass cls, double horizon,
                                         const Overrides& ov) {
  if (!oj && !ov.oracle_scheme) return std::nullopt;
  OracleConfig o;
  o.horizon = horizon;
  switch (cls) {
    case ProblemClass::hyperbolic_system:
    case ProblemClass::plate: o.scheme = OracleConfig::Scheme::central_difference_wave; break;
    case ProblemClass::maxwell: o.scheme = OracleConfig::Scheme::maxwell_leapfrog; break;
    default: o.scheme = OracleConfig::Scheme::crank_nicolson;
  }
  o.dt = horizon / 1000.0;
  if (oj) {
    allow_keys(*oj, path, {"scheme", "dt", "theta", "cfl", "tolerance", "max_iterations"});
    if (const json* s = find(*oj, "scheme"))
      o.scheme = at_path(join(path, "scheme"), [&] { return parse_scheme(text(*s, join(path, "scheme"))); });
    o.dt = number_or(*oj, path, "dt", o.dt);
    o.theta = number_or(*oj, path, "theta", o.theta);
    o.cfl = number_or(*oj, path, "cfl", o.cfl);
    o.tolerance = number_or(*oj, path, "tolerance", o.tolerance);
    o.max_iterations = integer_or(*oj, path, "max_iterations", o.max_iterations);
  }
  if (ov.oracle_scheme)
    o.scheme = at_path("--oracle", [&] { return parse_scheme(*ov.oracle_scheme); });
  if (ov.dt) o.dt = *ov.dt;

  using S = OracleConfig::Scheme;
  const bool parabolic_scheme = o.scheme == S::crank_nicolson || o.scheme == S::theta_method;
  const bool ok = (cls == ProblemClass::maxwell && o.scheme == S::maxwell_leapfrog) ||
                  ((cls == ProblemClass::hyperbolic_system || cls == ProblemClass::plate) &&
                   o.scheme == S::central_difference_wave) ||
                  ((cls == ProblemClass::parabolic || cls == ProblemClass::parabolic_system ||
                    cls == ProblemClass::parabolic_nonlinear) &&
                   parabolic_scheme);
  if (!ok)
    throw ConfigError(join(path, "scheme"), std::string("scheme ") + scheme_name(o.scheme) +
                                                " does not apply to class " + class_name(cls));
  at_path(path, [&] {
    o.validate();
    return 0;
  });
  return o;
}

struct Builder {
  const json& root;
  const Overrides& ov;
  Problem& pb;
  int dim = 0;

  TaylorField coef(const json& v, const std::string& path) {
    return sample_series(series(v, path, dim), pb.grid, pb.series_order, path);
  }

  TaylorField coef_or(const json& obj, const std::string& path, const char* key, double fallback) {
    if (const json* v = find(obj, key)) return coef(*v, join(path, key));
    if (fallback == 0.0) return TaylorField();
    return TaylorField::constant(SpatialField::sample(pb.grid, [=](const Point&) { return fallback; }));
  }

  void parabolic_operator(const json& op, const std::string& path) {
    pb.parabolic = ParabolicScalarSpec::laplacian(pb.grid);
    if (const json* d = find(op, "diffusion")) {
      const std::string dp = join(path, "diffusion");
      if (!d->is_array() || static_cast<int>(d->size()) != dim) throw ConfigError(dp, "expected a dim x dim array");
      for (int i = 0; i < dim; ++i) {
        const json& row = (*d)[i];
        if (!row.is_array() || static_cast<int>(row.size()) != dim)
          throw ConfigError(join(dp, i), "expected " + std::to_string(dim) + " entries");
        for (int j = 0; j < dim; ++j) pb.parabolic.diffusion[i * dim + j] = coef(row[j], join(join(dp, i), j));
      }
    }
    if (const json* d = find(op, "drift")) {
      const std::string dp = join(path, "drift");
      if (!d->is_array() || static_cast<int>(d->size()) != dim) throw ConfigError(dp, "expected one entry per axis");
      for (int i = 0; i < dim; ++i) pb.parabolic.drift[i] = coef((*d)[i], join(dp, i));
    }
    pb.parabolic.reaction = coef_or(op, path, "reaction", 0.0);
    pb.parabolic.ellipticity = number_or(op, path, "ellipticity", 1e-9);
    at_path(path, [&] {
      validate(pb.parabolic);
      return 0;
    });
  }

  void nonlinear_terms(const json& nj, const std::string& path) {
    allow_keys(nj, path, {"lambda", "lambda_max", "b0", "b", "bb"});
    pb.nonlinear = NonlinearTermsSpec::zero(dim);
    pb.nonlinear.lambda = number(need(nj, path, "lambda"), join(path, "lambda"));
    pb.nonlinear.lambda_max = number_or(nj, path, "lambda_max", 0.0);
    pb.nonlinear.b0 = coef_or(nj, path, "b0", 0.0);
    if (const json* b = find(nj, "b")) {
      const std::string bp = join(path, "b");
      if (!b->is_array() || static_cast<int>(b->size()) != dim) throw ConfigError(bp, "expected one entry per axis");
      for (int i = 0; i < dim; ++i) pb.nonlinear.b[i] = coef((*b)[i], join(bp, i));
    }
    if (const json* b = find(nj, "bb")) {
      const std::string bp = join(path, "bb");
      if (!b->is_array() || static_cast<int>(b->size()) != dim) throw ConfigError(bp, "expected a dim x dim array");
      for (int i = 0; i < dim; ++i) {
        const json& row = (*b)[i];
        if (!row.is_array() || static_cast<int>(row.size()) != dim)
          throw ConfigError(join(bp, i), "expected " + std::to_string(dim) + " entries");
        for (int j = 0; j < dim; ++j) pb.nonlinear.bb[i * dim + j] = coef(row[j], join(join(bp, i), j));
      }
    }
    at_path(path, [&] {
      validate(pb.nonlinear, dim);
      return 0;
    });
  }

  // Sparse entries {"index": [...], "value": series}.
  template <class Slot>
  void entries(const json& list, const std::string& path, std::size_t arity, const std::vector<int>& bounds,
               Slot&& slot) {
    if (!list.is_array()) throw ConfigError(path, "expected an array of {index, value} entries");
    for (std::size_t e = 0; e < list.size(); ++e) {
      const std::string ep = join(path, e);
      allow_keys(list[e], ep, {"index", "value"});
      const json& idx = need(list[e], ep, "index");
      if (!idx.is_array() || idx.size() != arity)
        throw ConfigError(join(ep, "index"), "expected " + std::to_string(arity) + " indices");
      std::vector<int> ix;
      for (std::size_t q = 0; q < arity; ++q) {
        const int v = integer(idx[q], join(join(ep, "index"), q));
        if (v < 0 || v >= bounds[q]) throw ConfigError(join(join(ep, "index"), q), "index out of range");
        ix.push_back(v);
      }
      slot(ix) = coef(need(list[e], ep, "value"), join(ep, "value"));
    }
  }

  void system_operator(const json& op, const std::string& path) {
    const int n = pb.components;
    const std::string base = find(op, "a_base") ? text(op["a_base"], join(path, "a_base")) : "laplacian";
    if (base == "laplacian") pb.system = DivFormSystemSpec::laplacian(pb.grid, n);
    else if (base == "zero") pb.system = DivFormSystemSpec::zero(pb.grid, n);
    else throw ConfigError(join(path, "a_base"), "expected 'laplacian' or 'zero'");
    DivFormSystemSpec& s = pb.system;
    if (const json* a = find(op, "a"))
      entries(*a, join(path, "a"), 4, {n, n, dim, dim}, [&](const std::vector<int>& i) -> TaylorField& {
        return s.a_at(i[0], i[1], i[2], i[3]);
      });
    if (const json* b = find(op, "b"))
      entries(*b, join(path, "b"), 3, {n, n, dim}, [&](const std::vector<int>& i) -> TaylorField& {
        return s.b_at(i[0], i[1], i[2]);
      });
    if (const json* g = find(op, "g"))
      entries(*g, join(path, "g"), 2, {n, n}, [&](const std::vector<int>& i) -> TaylorField& { return s.g_at(i[0], i[1]); });
    s.ellipticity = number_or(op, path, "ellipticity", 1e-9);
    at_path(path, [&] {
      validate(s);
      return 0;
    });
  }

  PlateSpec::Fn point_fn(const json& v, const std::string& path) {
    const Expression e = expression(v, path, dim, false);
    return [e](const Point& x) { return e.eval(x); };
  }

  void plate_operator(const json& op, const std::string& path) {
    at_path(path, [&] {
      if (const json* m = find(op, "material")) {
        allow_keys(op, path, {"material", "thickness", "thickness_bounds"});
        const std::string mp = join(path, "material");
        allow_keys(*m, mp, {"E1", "E2", "G", "mu1", "mu2", "rho", "a0", "a1"});
        PlateMaterial mat;
        mat.E1 = number_or(*m, mp, "E1", mat.E1);
        mat.E2 = number_or(*m, mp, "E2", mat.E2);
        mat.G = number_or(*m, mp, "G", mat.G);
        mat.mu1 = number_or(*m, mp, "mu1", mat.mu1);
        mat.mu2 = number_or(*m, mp, "mu2", mat.mu2);
        mat.rho = number_or(*m, mp, "rho", mat.rho);
        mat.a0 = number_or(*m, mp, "a0", mat.a0);
        mat.a1 = number_or(*m, mp, "a1", mat.a1);
        const auto bounds = numbers(need(op, path, "thickness_bounds"), join(path, "thickness_bounds"), 2);
        pb.plate = PlateSpec::from_material(pb.grid, mat, point_fn(need(op, path, "thickness"), join(path, "thickness")),
                                            bounds[0], bounds[1]);
      } else {
        allow_keys(op, path, {"rigidities", "a0", "a1"});
        const std::string rp = join(path, "rigidities");
        const json& r = need(op, path, "rigidities");
        allow_keys(r, rp, {"D1", "D2", "D12", "D3", "rho_h"});
        auto get = [&](const char* k) { return point_fn(need(r, rp, k), join(rp, k)); };
        pb.plate = PlateSpec::from_rigidities(pb.grid, get("D1"), get("D2"), get("D12"), get("D3"), get("rho_h"),
                                              number_or(op, path, "a0", 0.0), number_or(op, path, "a1", 0.0));
      }
      return 0;
    });
  }

  void maxwell_operator(const json& op, const std::string& path) {
    allow_keys(op, path, {"mu", "xi", "sigma", "bounds"});
    auto field = [&](const char* key, double fallback) {
      if (!find(op, key)) return SpatialField::sample(pb.grid, [=](const Point&) { return fallback; });
      const PlateSpec::Fn fn = point_fn(op[key], join(path, key));
      return SpatialField::sample(pb.grid, fn);
    };
    MaxwellSpec ms{field("mu", 1.0), field("xi", 1.0), field("sigma", 0.0)};
    MaxwellBounds b;
    auto range = [&](const SpatialField& f, double& lo, double& hi) {
      lo = std::numeric_limits<double>::infinity();
      hi = -lo;
      for (std::size_t p = 0; p < pb.grid.size(); ++p)
        if (pb.grid.in_mask(p)) {
          lo = std::min(lo, f(0, p));
          hi = std::max(hi, f(0, p));
        }
    };
    double unused = 0.0;
    range(ms.mu_hat, b.mu_min, b.mu_max);
    range(ms.xi_hat, b.xi_min, b.xi_max);
    range(ms.sigma, unused, b.sigma_max);
    if (const json* bj = find(op, "bounds")) {
      const std::string bp = join(path, "bounds");
      allow_keys(*bj, bp, {"mu_min", "mu_max", "xi_min", "xi_max", "sigma_max"});
      b.mu_min = number_or(*bj, bp, "mu_min", b.mu_min);
      b.mu_max = number_or(*bj, bp, "mu_max", b.mu_max);
      b.xi_min = number_or(*bj, bp, "xi_min", b.xi_min);
      b.xi_max = number_or(*bj, bp, "xi_max", b.xi_max);
      b.sigma_max = number_or(*bj, bp, "sigma_max", b.sigma_max);
    }
    at_path(path, [&] {
      validate(ms, b);
      return 0;
    });
    pb.maxwell = std::move(ms);
  }

  void build_operator() {
    const std::string path = "/operator";
    const json empty = json::object();
    const json& op = find(root, "operator") ? root["operator"] : empty;
    if (!op.is_object()) throw ConfigError(path, "expected an object");
    switch (pb.cls) {
      case ProblemClass::parabolic:
        allow_keys(op, path, {"diffusion", "drift", "reaction", "ellipticity"});
        parabolic_operator(op, path);
        break;
      case ProblemClass::parabolic_nonlinear:
        allow_keys(op, path, {"diffusion", "drift", "reaction", "ellipticity", "nonlinear"});
        parabolic_operator(op, path);
        nonlinear_terms(need(op, path, "nonlinear"), join(path, "nonlinear"));
        break;
      case ProblemClass::parabolic_system:
      case ProblemClass::hyperbolic_system:
        allow_keys(op, path, {"components", "a_base", "a", "b", "g", "ellipticity"});
        pb.components = integer_or(op, path, "components", 1);
        if (pb.components < 1) throw ConfigError(join(path, "components"), "must be positive");
        system_operator(op, path);
        break;
      case ProblemClass::plate:
        plate_operator(op, path);
        break;
      case ProblemClass::maxwell:
        pb.components = 3;
        maxwell_operator(op, path);
        break;
    }
  }

  // Fields given per component as expressions in x.
  SpatialField initial(const json& data, const char* key, bool compact, const SpatialField& bump) {
    const std::string path = join("/data", key);
    std::vector<SpatialField> parts;
    if (const json* v = find(data, key)) {
      std::vector<std::string> paths;
      const auto items = per_component(*v, path, pb.components, paths);
      for (std::size_t i = 0; i < items.size(); ++i) {
        const Expression e = expression(items[i], paths[i], dim, false);
        SpatialField s = at_path(paths[i], [&] { return SpatialField::sample(pb.grid, [&](const Point& x) { return e.eval(x); }); });
        parts.push_back(compact ? multiply(bump, s) : s);
      }
    } else {
      parts.assign(pb.components, SpatialField(pb.grid, 1));
    }
    return stack_fields(parts, pb.grid);
  }

  TaylorField series_data(const json& data, const char* key, int n, bool compact, const SpatialField& bump) {
    const json* v = find(data, key);
    if (!v) return TaylorField();
    const std::string path = join("/data", key);
    std::vector<std::string> paths;
    const auto items = per_component(*v, path, n, paths);
    std::vector<TaylorField> parts;
    for (std::size_t i = 0; i < items.size(); ++i) {
      TaylorField s = coef(items[i], paths[i]);
      parts.push_back(compact ? compact_series(std::move(s), bump) : std::move(s));
    }
    return stack_series(parts, pb.grid);
  }

  void build_data() {
    const std::string path = "/data";
    const json empty = json::object();
    const json& data = find(root, "data") ? root["data"] : empty;
    allow_keys(data, path,
               {"u0", "u1", "f", "u_b", "compact", "series_order", "solution", "D_potential", "B_potential", "G1",
                "G2"});
    const bool compact = boolean_or(data, path, "compact", true);
    const bool smooth = find(root, "bump") && boolean_or(root["bump"], "/bump", "smooth", false);
    SpatialField bump_field = at_path("/bump", [&] {
      pb.bump.validate(*pb.domain, pb.grid);
      return bump(*pb.domain, pb.bump, pb.grid);
    });
    if (smooth) bump_field = smooth_compact([](const Point&) { return 1.0; }, *pb.domain, pb.bump, pb.grid, true);

    auto reject = [&](std::initializer_list<const char*> keys, const char* why) {
      for (const char* k : keys)
        if (find(data, k)) throw ConfigError(join(path, k), why);
    };

    if (pb.cls == ProblemClass::maxwell) {
      reject({"u0", "u1", "f", "u_b", "solution"}, "not used by class maxwell (use D_potential, B_potential, G1, G2)");
      auto potential = [&](const char* key) {
        const std::string pp = join(path, key);
        const json* v = find(data, key);
        if (!v) return SpatialField(pb.grid, 3);
        if (!v->is_array() || v->size() != 3) throw ConfigError(pp, "expected 3 expressions");
        std::array<Expression, 3> w;
        for (int i = 0; i < 3; ++i) w[i] = expression((*v)[i], join(pp, i), 3, false);
        return at_path(pp, [&] { return divfree_data(w, *pb.domain, pb.bump, pb.grid); });
      };
      pb.u0 = potential("D_potential");
      pb.u1 = potential("B_potential");
      pb.f = series_data(data, "G1", 3, compact, bump_field);
      pb.g2 = series_data(data, "G2", 3, compact, bump_field);
      return;
    }
    reject({"D_potential", "B_potential", "G1", "G2"}, "only used by class maxwell");
    if (!pb.second_order_in_time()) reject({"u1"}, "u1 is only used by second-order-in-time classes");

    if (const json* sol = find(data, "solution")) {
      reject({"u0", "u1", "f", "u_b"}, "cannot be combined with 'solution'");
      if (pb.cls != ProblemClass::parabolic && pb.cls != ProblemClass::parabolic_system &&
          pb.cls != ProblemClass::hyperbolic_system)
        throw ConfigError(join(path, "solution"), std::string("manufactured solutions are not supported for class ") +
                                                      class_name(pb.cls));
      const int m = pb.truncation.mode == TruncationPolicy::Mode::fixed ? pb.truncation.order : pb.series_order;
      std::vector<std::string> paths;
      const auto items = per_component(*sol, join(path, "solution"), pb.components, paths);
      std::vector<TaylorField> parts;
      for (std::size_t i = 0; i < items.size(); ++i) {
        const BoundaryData s = series(items[i], paths[i], dim);
        TaylorField c = sample_series(s, pb.grid, m, paths[i]);
        parts.push_back(compact ? compact_series(std::move(c), bump_field) : std::move(c));
      }
      TaylorField target = stack_series(parts, pb.grid);
      // pad to exactly m + 1 coefficients so the round trip compares like with like
      std::vector<SpatialField> c(target.coefficients().begin(), target.coefficients().end());
      c.resize(std::max<std::size_t>(c.size(), m + 1), SpatialField(pb.grid, pb.components));
      c.resize(m + 1, SpatialField(pb.grid, pb.components));
      pb.solution = TaylorField(std::move(c));
      pb.u0 = (*pb.solution)[0];
      pb.u1 = m >= 1 ? (*pb.solution)[1] : SpatialField(pb.grid, pb.components);
      return;
    }

    const json* ub = find(data, "u_b");
    if (ub && (pb.cls == ProblemClass::parabolic_nonlinear || pb.cls == ProblemClass::plate))
      throw ConfigError(join(path, "u_b"), std::string("boundary data are not supported for class ") + class_name(pb.cls));
    const bool lifted = ub != nullptr;

    // With boundary data the initial values must carry the boundary values, so
    // they are used as written.
    const SpatialField u0 = initial(data, "u0", compact && !lifted, bump_field);
    const SpatialField u1 = pb.second_order_in_time() ? initial(data, "u1", compact && !lifted, bump_field)
                                                      : SpatialField();
    const TaylorField f = series_data(data, "f", pb.components, compact, bump_field);

    if (!lifted) {
      pb.u0 = u0;
      pb.u1 = u1;
      pb.f = f;
      return;
    }

    std::vector<std::string> paths;
    const auto items = per_component(*ub, join(path, "u_b"), pb.components, paths);
    std::vector<TaylorField> parts;
    std::vector<std::string> u0_paths;
    std::vector<json> u0_items;
    if (const json* v = find(data, "u0")) u0_items = per_component(*v, join(path, "u0"), pb.components, u0_paths);
    for (std::size_t i = 0; i < items.size(); ++i) {
      const BoundaryData b = series(items[i], paths[i], dim);
      const Expression e0 = u0_items.empty() ? Expression::constant(0.0)
                                             : expression(u0_items[i], u0_paths[i], dim, false);
      at_path(paths[i], [&] {
        check_compatibility([&](const Point& x) { return e0.eval(x); }, b, *pb.domain, pb.bump.a, pb.grid);
        return 0;
      });
      const int m = b.depends_on_t() ? (b.expr.empty() ? static_cast<int>(b.coefficients.size()) - 1 : pb.series_order) : 0;
      parts.push_back(at_path(paths[i], [&] { return boundary_lift_extended(b, *pb.domain, pb.bump.a, pb.grid, m); }));
    }
    pb.lift = stack_series(parts, pb.grid);
    const HomogenizedProblem hp = at_path(path, [&] {
      switch (pb.cls) {
        case ProblemClass::parabolic: return homogenize(pb.parabolic, f, u0, pb.lift);
        case ProblemClass::parabolic_system: return homogenize(pb.system, f, u0, pb.lift);
        default: return homogenize_hyperbolic(pb.system, f, u0, u1, pb.lift);
      }
    });
    pb.f = hp.f;
    pb.u0 = hp.u0;
    pb.u1 = hp.u1;
    pb.lift = hp.w;
  }
};

}  // namespace

Problem build_problem(const json& root, const Overrides& ov) {
  allow_keys(root, "",
             {"class", "domain", "grid", "operator", "data", "bump", "horizon", "truncation", "continuation", "oracle",
              "snapshots", "study"});
  Problem pb;
  pb.cls = parse_class(text(need(root, "", "class"), "/class"));
  pb.domain = build_domain(need(root, "", "domain"), "/domain");
  const int dim = pb.domain->dim();
  if (pb.cls == ProblemClass::plate && dim != 2) throw ConfigError("/domain", "class plate needs a 2-D domain");
  if (pb.cls == ProblemClass::maxwell && dim != 3) throw ConfigError("/domain", "class maxwell needs a 3-D domain");
  pb.grid = build_grid(need(root, "", "grid"), "/grid", *pb.domain, ov);

  pb.horizon = number(need(root, "", "horizon"), "/horizon");
  if (!(pb.horizon > 0.0)) throw ConfigError("/horizon", "must be positive");
  pb.truncation = build_truncation(find(root, "truncation"), "/truncation", pb.horizon, ov);
  pb.continuation = build_continuation(find(root, "continuation"), "/continuation");
  pb.oracle = build_oracle(find(root, "oracle"), "/oracle", pb.cls, pb.horizon, ov);

  if (ov.snapshots) {
    pb.snapshots = *ov.snapshots;
  } else if (const json* s = find(root, "snapshots")) {
    pb.snapshots = numbers(*s, "/snapshots");
  } else {
    pb.snapshots = default_times(pb.horizon);
  }
  for (std::size_t i = 0; i < pb.snapshots.size(); ++i) {
    const double t = pb.snapshots[i];
    if (t < 0.0 || t > pb.horizon) throw ConfigError(join("/snapshots", i), "snapshot time outside [0, horizon]");
    if (i && t < pb.snapshots[i - 1]) throw ConfigError(join("/snapshots", i), "snapshot times must be sorted");
  }

  if (const json* b = find(root, "bump")) {
    allow_keys(*b, "/bump", {"a", "smooth"});
    pb.bump.a = number_or(*b, "/bump", "a", pb.bump.a);
  }

  if (const json* d = find(root, "data"))
    if (const json* so = find(*d, "series_order")) {
      pb.series_order = integer(*so, "/data/series_order");
      if (pb.series_order < 0 || pb.series_order > 400)
        throw ConfigError("/data/series_order", "must lie in [0, 400]");
    }

  if (const json* st = find(root, "study")) {
    allow_keys(*st, "/study", {"orders", "grids"});
    auto ints = [&](const char* key, int lo) {
      std::vector<int> out;
      const std::string p = join("/study", key);
      if (const json* v = find(*st, key)) {
        if (!v->is_array()) throw ConfigError(p, "expected an array of integers");
        for (std::size_t i = 0; i < v->size(); ++i) {
          out.push_back(integer((*v)[i], join(p, i)));
          if (out.back() < lo) throw ConfigError(join(p, i), "must be at least " + std::to_string(lo));
        }
      }
      return out;
    };
    pb.study_orders = ints("orders", 1);
    pb.study_grids = ints("grids", 3);
  }

  Builder b{root, ov, pb, dim};
  b.build_operator();
  b.build_data();
  return pb;
}

json read_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path, "cannot open config file");
  try {
    return json::parse(in, nullptr, true, true);
  } catch (const json::parse_error& e) {
    throw ConfigError(path, std::string("invalid JSON: ") + e.what());
  }
}

Problem load_problem(const std::string& path, const Overrides& overrides) {
  return build_problem(read_config(path), overrides);
}

}  // namespace tibvp
