#pragma once

#include <string>
#include <vector>

#include "moplms/matrix.hpp"

namespace moplms {

// Reads a UTF-8 comma-separated file: one header row (its field count fixes
// the width), then numeric data rows. Errors carry 1-based row/column
// locations; a header with no data rows is rejected.
Matrix read_csv(const std::string& path);

// Writes the matrix with a generated header c0,c1,... and 17-significant-digit
// reals, so write -> read reproduces every entry bit for bit.
void write_csv(const Matrix& m, const std::string& path);

// Same, with caller-supplied column names (one per column).
void write_csv(const Matrix& m, const std::string& path,
               const std::vector<std::string>& header);

}  // namespace moplms
