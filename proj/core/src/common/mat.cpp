#include "ugnn/common/mat.hpp"

#include <cmath>
#include <cstdio>
#include <utility>

#include "ugnn/common/error.hpp"

namespace ugnn {

Mat::Mat(int r, int c, std::vector<double> data) : rows(r), cols(c), d(std::move(data)) {
  if (d.size() != static_cast<std::size_t>(r) * c) {
    throw StructuralError("Mat: data length does not match shape");
  }
}

Mat::Mat(std::initializer_list<std::initializer_list<double>> v) {
  rows = static_cast<int>(v.size());
  cols = rows > 0 ? static_cast<int>(v.begin()->size()) : 0;
  d.reserve(static_cast<std::size_t>(rows) * cols);
  for (const auto& row : v) {
    if (static_cast<int>(row.size()) != cols) {
      throw StructuralError("Mat: ragged initializer");
    }
    d.insert(d.end(), row.begin(), row.end());
  }
}

Mat Mat::identity(int n) {
  Mat m(n, n);
  for (int i = 0; i < n; ++i) m.at(i, i) = 1.0;
  return m;
}

Mat Mat::full(int r, int c, double v) {
  Mat m(r, c);
  for (auto& x : m.d) x = v;
  return m;
}

bool Mat::all_finite() const {
  for (double x : d) {
    if (!std::isfinite(x)) return false;
  }
  return true;
}

Mat matmul(const Mat& a, const Mat& b) {
  if (a.cols != b.rows) throw StructuralError("matmul: inner dimensions differ");
  Mat out(a.rows, b.cols);
  for (int i = 0; i < a.rows; ++i) {
    const double* arow = a.d.data() + static_cast<std::size_t>(i) * a.cols;
    double* orow = out.d.data() + static_cast<std::size_t>(i) * out.cols;
    for (int k = 0; k < a.cols; ++k) {
      const double aik = arow[k];
      if (aik == 0.0) continue;
      const double* brow = b.d.data() + static_cast<std::size_t>(k) * b.cols;
      for (int j = 0; j < b.cols; ++j) orow[j] += aik * brow[j];
    }
  }
  return out;
}

Mat transpose(const Mat& a) {
  Mat out(a.cols, a.rows);
  for (int i = 0; i < a.rows; ++i)
    for (int j = 0; j < a.cols; ++j) out.at(j, i) = a.at(i, j);
  return out;
}

Mat add(const Mat& a, const Mat& b) {
  if (!a.same_shape(b)) throw StructuralError("add: shape mismatch");
  Mat out = a;
  for (std::size_t i = 0; i < out.d.size(); ++i) out.d[i] += b.d[i];
  return out;
}

Mat sub(const Mat& a, const Mat& b) {
  if (!a.same_shape(b)) throw StructuralError("sub: shape mismatch");
  Mat out = a;
  for (std::size_t i = 0; i < out.d.size(); ++i) out.d[i] -= b.d[i];
  return out;
}

Mat scale(const Mat& a, double s) {
  Mat out = a;
  for (auto& x : out.d) x *= s;
  return out;
}

Mat hadamard(const Mat& a, const Mat& b) {
  if (!a.same_shape(b)) throw StructuralError("hadamard: shape mismatch");
  Mat out = a;
  for (std::size_t i = 0; i < out.d.size(); ++i) out.d[i] *= b.d[i];
  return out;
}

Mat concat_cols(const Mat& a, const Mat& b) {
  if (a.rows != b.rows) throw StructuralError("concat_cols: row counts differ");
  Mat out(a.rows, a.cols + b.cols);
  for (int i = 0; i < a.rows; ++i) {
    for (int j = 0; j < a.cols; ++j) out.at(i, j) = a.at(i, j);
    for (int j = 0; j < b.cols; ++j) out.at(i, a.cols + j) = b.at(i, j);
  }
  return out;
}

Mat slice_cols(const Mat& a, int c0, int c1) {
  if (c0 < 0 || c1 > a.cols || c0 >= c1) throw StructuralError("slice_cols: bad column range");
  Mat out(a.rows, c1 - c0);
  for (int i = 0; i < a.rows; ++i)
    for (int j = c0; j < c1; ++j) out.at(i, j - c0) = a.at(i, j);
  return out;
}

Mat matpow(const Mat& a, int k) {
  if (a.rows != a.cols) throw StructuralError("matpow: matrix not square");
  if (k < 0) throw ArgumentError("matpow: negative exponent");
  Mat out = Mat::identity(a.rows);
  for (int i = 0; i < k; ++i) out = matmul(out, a);
  return out;
}

double frobenius_norm(const Mat& a) {
  double s = 0.0;
  for (double x : a.d) s += x * x;
  return std::sqrt(s);
}

double max_abs_diff(const Mat& a, const Mat& b) {
  if (!a.same_shape(b)) throw StructuralError("max_abs_diff: shape mismatch");
  double m = 0.0;
  for (std::size_t i = 0; i < a.d.size(); ++i) m = std::max(m, std::fabs(a.d[i] - b.d[i]));
  return m;
}

bool bitwise_equal(const Mat& a, const Mat& b) {
  if (!a.same_shape(b)) return false;
  for (std::size_t i = 0; i < a.d.size(); ++i) {
    if (a.d[i] != b.d[i]) return false;
  }
  return true;
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return std::string(buf);
}

}  // namespace ugnn
