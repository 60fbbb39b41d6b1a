#include "ugnn/common/csv.hpp"

#include <cerrno>
#include <cstdlib>
#include <fstream>

#include "ugnn/common/error.hpp"

namespace ugnn::csv {

namespace {

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

}  // namespace

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      out.push_back(trim(cur));
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  out.push_back(trim(cur));
  return out;
}

double parse_double(const std::string& field, const std::string& context) {
  const char* begin = field.c_str();
  char* end = nullptr;
  errno = 0;
  double v = std::strtod(begin, &end);
  if (end == begin || *end != '\0' || errno == ERANGE) {
    throw DataError("expected a number at " + context + ", got '" + field + "'");
  }
  return v;
}

bool looks_numeric(const std::string& field) {
  const char* begin = field.c_str();
  char* end = nullptr;
  std::strtod(begin, &end);
  return end != begin && *end == '\0' && !field.empty();
}

std::vector<std::string> read_lines(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open file: " + path);
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(line);
  }
  while (!lines.empty() && trim(lines.back()).empty()) lines.pop_back();
  return lines;
}

Mat read_matrix(const std::string& path) {
  auto lines = read_lines(path);
  if (lines.empty()) throw DataError("empty matrix file: " + path);
  std::size_t start = 0;
  {
    auto first = split_line(lines[0]);
    if (!first.empty() && !looks_numeric(first[0])) start = 1;  // header row
  }
  if (start >= lines.size()) throw DataError("matrix file has only a header: " + path);
  std::vector<std::vector<double>> rows;
  for (std::size_t i = start; i < lines.size(); ++i) {
    auto fields = split_line(lines[i]);
    std::vector<double> row;
    row.reserve(fields.size());
    for (std::size_t j = 0; j < fields.size(); ++j) {
      row.push_back(parse_double(fields[j], path + ":" + std::to_string(i + 1)));
    }
    if (!rows.empty() && row.size() != rows.front().size()) {
      throw DataError("ragged matrix row at " + path + ":" + std::to_string(i + 1));
    }
    rows.push_back(std::move(row));
  }
  Mat m(static_cast<int>(rows.size()), static_cast<int>(rows.front().size()));
  for (int i = 0; i < m.rows; ++i)
    for (int j = 0; j < m.cols; ++j) m.at(i, j) = rows[i][j];
  return m;
}

void write_matrix(const std::string& path, const Mat& m) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write file: " + path);
  for (int i = 0; i < m.rows; ++i) {
    for (int j = 0; j < m.cols; ++j) {
      if (j) out << ',';
      out << format_double(m.at(i, j));
    }
    out << '\n';
  }
}

}  // namespace ugnn::csv
