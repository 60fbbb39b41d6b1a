#include "ugnn/graph/shift.hpp"

#include <algorithm>
#include <cmath>

#include "ugnn/common/csv.hpp"
#include "ugnn/common/error.hpp"
#include "ugnn/common/rng.hpp"

namespace ugnn::graph {

namespace {
constexpr int kDenseMirrorLimit = 64;
}

Mat GraphShift::apply(const Mat& x) const {
  if (x.rows != n_) throw StructuralError("GraphShift::apply: row count mismatch");
  Mat out(n_, x.cols);
  for (int i = 0; i < n_; ++i) {
    double* orow = out.d.data() + static_cast<std::size_t>(i) * x.cols;
    for (int p = row_ptr_[i]; p < row_ptr_[i + 1]; ++p) {
      const double wij = w_[p];
      const double* xrow = x.d.data() + static_cast<std::size_t>(col_[p]) * x.cols;
      for (int f = 0; f < x.cols; ++f) orow[f] += wij * xrow[f];
    }
  }
  return out;
}

Mat GraphShift::apply_dense(const Mat& x) const {
  if (dense_.d.empty()) throw ContractViolation("GraphShift::apply_dense: no dense mirror");
  if (x.rows != n_) throw StructuralError("GraphShift::apply_dense: row count mismatch");
  Mat out(n_, x.cols);
  for (int i = 0; i < n_; ++i) {
    double* orow = out.d.data() + static_cast<std::size_t>(i) * x.cols;
    const double* srow = dense_.d.data() + static_cast<std::size_t>(i) * n_;
    for (int j = 0; j < n_; ++j) {
      const double wij = srow[j];
      const double* xrow = x.d.data() + static_cast<std::size_t>(j) * x.cols;
      for (int f = 0; f < x.cols; ++f) orow[f] += wij * xrow[f];
    }
  }
  return out;
}

std::vector<double> GraphShift::weighted_degrees() const {
  std::vector<double> deg(n_, 0.0);
  for (int i = 0; i < n_; ++i)
    for (int p = row_ptr_[i]; p < row_ptr_[i + 1]; ++p) deg[i] += std::fabs(w_[p]);
  return deg;
}

Mat GraphShift::to_dense() const {
  Mat m(n_, n_);
  for (int i = 0; i < n_; ++i)
    for (int p = row_ptr_[i]; p < row_ptr_[i + 1]; ++p) m.at(i, col_[p]) = w_[p];
  return m;
}

double GraphShift::entry(int i, int j) const {
  auto begin = col_.begin() + row_ptr_[i];
  auto end = col_.begin() + row_ptr_[i + 1];
  auto it = std::lower_bound(begin, end, j);
  if (it == end || *it != j) return 0.0;
  return w_[it - col_.begin()];
}

double power_iteration_norm(const Mat& sym, int max_iters, double tol) {
  const int n = sym.rows;
  if (n == 0) return 0.0;
  // Deterministic start vector.
  std::uint64_t st = 0x5eedULL;
  Mat v(n, 1);
  for (int i = 0; i < n; ++i) {
    v.at(i, 0) = (static_cast<double>(splitmix64(st) >> 11) * 0x1.0p-53) - 0.5;
  }
  double nv = frobenius_norm(v);
  if (nv == 0.0) v.at(0, 0) = 1.0, nv = 1.0;
  for (auto& x : v.d) x /= nv;

  double est = 0.0;
  for (int it = 0; it < max_iters; ++it) {
    Mat w = matmul(sym, v);
    const double nw = frobenius_norm(w);
    if (nw == 0.0) return 0.0;  // v in the kernel; matrix may still be nonzero but est 0
    const double new_est = nw;  // ||S v|| with ||v|| = 1
    for (auto& x : w.d) x /= nw;
    v = std::move(w);
    if (std::fabs(new_est - est) <= tol * std::max(1.0, new_est)) {
      return new_est;
    }
    est = new_est;
  }
  return est;
}

GraphShift build_shift(const Mat& adjacency, bool normalize) {
  const int n = adjacency.rows;
  if (n == 0 || adjacency.cols != n) {
    throw StructuralError("build_shift: adjacency must be square and nonempty");
  }
  for (double x : adjacency.d) {
    if (!std::isfinite(x)) throw StructuralError("build_shift: non-finite adjacency entry");
  }
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (std::fabs(adjacency.at(i, j) - adjacency.at(j, i)) > 1e-9) {
        throw StructuralError("build_shift: adjacency not symmetric within 1e-9");
      }
    }
  }

  // Zero-diagonal working copy; symmetrize to kill sub-tolerance asymmetry.
  Mat a(n, n);
  bool any_nonzero = false;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      const double v = 0.5 * (adjacency.at(i, j) + adjacency.at(j, i));
      a.at(i, j) = v;
      if (v != 0.0) any_nonzero = true;
    }
  }
  if (!any_nonzero) throw DataError("build_shift: degenerate graph, all weights zero");

  if (normalize) {
    const double norm = power_iteration_norm(a);
    if (norm <= 0.0) throw DataError("build_shift: spectral norm estimate is zero");
    for (auto& x : a.d) x /= norm;
  }

  GraphShift s;
  s.n_ = n;
  s.row_ptr_.assign(n + 1, 0);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (a.at(i, j) != 0.0) ++s.row_ptr_[i + 1];
    }
  }
  for (int i = 0; i < n; ++i) s.row_ptr_[i + 1] += s.row_ptr_[i];
  s.col_.resize(s.row_ptr_[n]);
  s.w_.resize(s.row_ptr_[n]);
  std::vector<int> fill(s.row_ptr_.begin(), s.row_ptr_.end() - 1);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {  // ascending j keeps columns sorted
      const double v = a.at(i, j);
      if (v != 0.0) {
        s.col_[fill[i]] = j;
        s.w_[fill[i]] = v;
        ++fill[i];
      }
    }
  }
  if (n < kDenseMirrorLimit) s.dense_ = a;
  s.spectral_norm_ = power_iteration_norm(a);
  return s;
}

GraphShift read_adjacency_csv(const std::string& path, bool normalize) {
  Mat a = csv::read_matrix(path);
  if (a.rows != a.cols) {
    throw DataError("adjacency CSV is not square: " + path);
  }
  return build_shift(a, normalize);
}

}  // namespace ugnn::graph
