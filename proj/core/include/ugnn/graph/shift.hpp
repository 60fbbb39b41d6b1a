#pragma once

#include <string>
#include <vector>

#include "ugnn/common/mat.hpp"

namespace ugnn::graph {

/// Sparse symmetric graph shift operator with zero diagonal. Stored as CSR
/// with sorted column indices; a dense mirror is kept for small graphs so the
/// two application paths can be compared bit for bit. Immutable once built.
class GraphShift {
 public:
  GraphShift() = default;

  int n_nodes() const { return n_; }
  double spectral_norm() const { return spectral_norm_; }

  /// S * x, applied row by row in ascending column order.
  Mat apply(const Mat& x) const;

  /// Same contract as apply() but via the dense mirror; bit-identical to the
  /// sparse path. Only valid when the dense mirror exists (n_nodes < 64 or
  /// keep_dense was requested at build time).
  Mat apply_dense(const Mat& x) const;
  bool has_dense() const { return !dense_.d.empty(); }

  /// Weighted degree: sum of absolute incident weights per node.
  std::vector<double> weighted_degrees() const;

  Mat to_dense() const;

  /// Entry lookup (binary search over the CSR row).
  double entry(int i, int j) const;

  friend GraphShift build_shift(const Mat& adjacency, bool normalize);

 private:
  int n_ = 0;
  std::vector<int> row_ptr_;
  std::vector<int> col_;
  std::vector<double> w_;
  Mat dense_;  // empty when not mirrored
  double spectral_norm_ = 0.0;
};

/// Builds a shift operator from a dense symmetric adjacency. The diagonal is
/// zeroed; with normalize the entries are divided by the spectral norm
/// (power iteration, 200 iterations, tolerance 1e-10).
GraphShift build_shift(const Mat& adjacency, bool normalize = true);

/// Largest absolute eigenvalue of a symmetric matrix by power iteration on a
/// deterministic start vector. Uses the norm-growth ratio, so spectra with
/// +/- lambda pairs converge as well.
double power_iteration_norm(const Mat& sym, int max_iters = 200, double tol = 1e-10);

GraphShift read_adjacency_csv(const std::string& path, bool normalize = true);

}  // namespace ugnn::graph
