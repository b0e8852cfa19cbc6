#pragma once

#include <iosfwd>
#include <string>

#include "parsio/spaces.hpp"

namespace parsio {

/// CSV dump: two '#' header lines (format tag; n, h, counts, M, periodic,
/// label), a column line, then one row per node in flat order with
/// coordinates, A, the gradient components, d_t A and D_n A. Values are
/// written with 17 significant digits so a round trip is exact.
void write_surface_csv(const Surface& s, std::ostream& out);
void write_surface_csv(const Surface& s, const std::string& path);

Surface read_surface_csv(std::istream& in);
Surface read_surface_csv(const std::string& path);

}  // namespace parsio
