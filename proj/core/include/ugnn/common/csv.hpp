#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ugnn/common/mat.hpp"

namespace ugnn::csv {

/// Splits one CSV line on commas. No quoting support; fields are trimmed.
std::vector<std::string> split_line(const std::string& line);

/// Strict double parse; throws DataError naming the field on failure.
double parse_double(const std::string& field, const std::string& context);

bool looks_numeric(const std::string& field);

/// Reads a whole file into lines, dropping empty trailing lines. Throws
/// DataError when the file cannot be opened.
std::vector<std::string> read_lines(const std::string& path);

/// Dense matrix from CSV (decimal floats, row-major). A leading header row is
/// skipped when its first field is not numeric.
Mat read_matrix(const std::string& path);

/// Writes a dense matrix as CSV with round-trip-exact float formatting.
void write_matrix(const std::string& path, const Mat& m);

}  // namespace ugnn::csv
