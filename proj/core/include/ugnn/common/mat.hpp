#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace ugnn {

/// Dense row-major matrix of doubles. The single value type shared by the
/// graph kernels, the autodiff tape and the data pipeline.
struct Mat {
  int rows = 0;
  int cols = 0;
  std::vector<double> d;

  Mat() = default;
  Mat(int r, int c) : rows(r), cols(c), d(static_cast<std::size_t>(r) * c, 0.0) {}
  Mat(int r, int c, std::vector<double> data);
  Mat(std::initializer_list<std::initializer_list<double>> v);

  double& at(int i, int j) { return d[static_cast<std::size_t>(i) * cols + j]; }
  double at(int i, int j) const { return d[static_cast<std::size_t>(i) * cols + j]; }

  std::size_t size() const { return d.size(); }
  bool same_shape(const Mat& o) const { return rows == o.rows && cols == o.cols; }

  static Mat zeros(int r, int c) { return Mat(r, c); }
  static Mat identity(int n);
  static Mat full(int r, int c, double v);

  bool all_finite() const;
};

Mat matmul(const Mat& a, const Mat& b);
Mat transpose(const Mat& a);
Mat add(const Mat& a, const Mat& b);
Mat sub(const Mat& a, const Mat& b);
Mat scale(const Mat& a, double s);
Mat hadamard(const Mat& a, const Mat& b);
Mat concat_cols(const Mat& a, const Mat& b);
Mat slice_cols(const Mat& a, int c0, int c1);

/// Dense matrix power a^k (square a, k >= 0). Brute-force oracle helper.
Mat matpow(const Mat& a, int k);

double frobenius_norm(const Mat& a);
double max_abs_diff(const Mat& a, const Mat& b);
bool bitwise_equal(const Mat& a, const Mat& b);

/// Formats a double so that parsing the string recovers the exact bits.
std::string format_double(double v);

}  // namespace ugnn
