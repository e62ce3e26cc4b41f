#pragma once

#include <string>
#include <vector>

#include "lrd/fts.hpp"

namespace lrd {

/// Curve panel CSV: header row = grid points, each following row = one curve.
/// Parsing is locale-independent; ragged rows are rejected.
FunctionalSeries read_curve_csv(const std::string& path);
void write_curve_csv(const FunctionalSeries& fs, const std::string& path);

/// One value per line, no header.
std::vector<double> read_scalar_csv(const std::string& path);

/// Number of comma-separated fields in the first line (0 for empty file).
int csv_first_row_width(const std::string& path);

}  // namespace lrd
