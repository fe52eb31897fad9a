#include "tibvp/field_io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <vector>

#include "tibvp/errors.hpp"

namespace tibvp {

namespace {

void append(std::string& line, double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  line += buf;
}

double parse_double(const std::string& s, int row) {
  double v = 0.0;
  const char* b = s.data();
  const char* e = b + s.size();
  while (b < e && *b == ' ') ++b;
  const auto res = std::from_chars(b, e, v);
  if (res.ec != std::errc()) throw InvariantError("field CSV row " + std::to_string(row) + ": bad number '" + s + "'");
  return v;
}

}  // namespace

void write_csv(const SpatialField& field, std::ostream& out) {
  const Grid& g = field.grid();
  std::string line;
  for (int i = 0; i < g.dim(); ++i) line += "x" + std::to_string(i + 1) + ",";
  line += "component,value\n";
  out << line;
  for (int c = 0; c < field.components(); ++c) {
    for (std::size_t idx = 0; idx < g.size(); ++idx) {
      if (!g.in_mask(idx)) continue;
      const Point p = g.point(idx);
      line.clear();
      for (int i = 0; i < g.dim(); ++i) {
        append(line, p[i]);
        line += ',';
      }
      line += std::to_string(c);
      line += ',';
      append(line, field(c, idx));
      line += '\n';
      out << line;
    }
  }
}

void write_csv(const SpatialField& field, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open " + path + " for writing");
  write_csv(field, out);
  if (!out) throw Error("failed writing " + path);
}

SpatialField read_csv(const Grid& grid, int components, std::istream& in) {
  SpatialField field(grid, components);
  std::string line;
  if (!std::getline(in, line)) throw InvariantError("field CSV is empty");
  const int cols = grid.dim() + 2;
  int row = 1;
  std::vector<std::string> cells;
  while (std::getline(in, line)) {
    ++row;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    cells.clear();
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (static_cast<int>(cells.size()) != cols)
      throw InvariantError("field CSV row " + std::to_string(row) + ": expected " + std::to_string(cols) +
                           " columns");
    std::array<int, 3> ijk{0, 0, 0};
    for (int i = 0; i < grid.dim(); ++i) {
      const double x = parse_double(cells[i], row);
      const double r = (x - grid.origin(i)) / grid.spacing(i);
      const double n = std::round(r);
      if (std::abs(r - n) > 1e-2 || n < 0 || n >= grid.count(i))
        throw InvariantError("field CSV row " + std::to_string(row) + ": point is not a grid node");
      ijk[i] = static_cast<int>(n);
    }
    const double cd = parse_double(cells[grid.dim()], row);
    const int c = static_cast<int>(cd);
    if (c != cd || c < 0 || c >= components)
      throw InvariantError("field CSV row " + std::to_string(row) + ": bad component");
    const std::size_t idx = grid.index(ijk[0], ijk[1], ijk[2]);
    if (grid.in_mask(idx)) field(c, idx) = parse_double(cells[grid.dim() + 1], row);
  }
  return field;
}

SpatialField read_csv(const Grid& grid, int components, const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path);
  return read_csv(grid, components, in);
}

}  // namespace tibvp
