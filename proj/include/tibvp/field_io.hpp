#pragma once

#include <iosfwd>
#include <string>

#include "tibvp/field.hpp"

namespace tibvp {

/// Writes one row per masked point and component with the header
/// "x1[,x2[,x3]],component,value". Values use 17 significant digits so a
/// read back is exact.
void write_csv(const SpatialField& field, std::ostream& out);
void write_csv(const SpatialField& field, const std::string& path);

/// Reads rows written by write_csv onto `grid`. Coordinates are matched to
/// the nearest grid node and must lie within a hundredth of a spacing of it.
/// Points not listed stay zero.
SpatialField read_csv(const Grid& grid, int components, std::istream& in);
SpatialField read_csv(const Grid& grid, int components, const std::string& path);

}  // namespace tibvp
