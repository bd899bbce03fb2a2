#pragma once

#include <string>

#include "sympca/matrix.hpp"

namespace sympca {

/// Matrix file format: plain CSV, one matrix row per line, decimal floats,
/// no header. Values are written with 17 significant digits so a read-back
/// reproduces the doubles exactly.
void write_matrix_csv(const std::string& path, const Matrix& m);
Matrix read_matrix_csv(const std::string& path);

std::string format_double(double v);

} // namespace sympca
