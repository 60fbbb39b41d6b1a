#include "ugnn/graph/sampling.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

#include "ugnn/common/error.hpp"

namespace ugnn::graph {

SelectionMatrix SelectionMatrix::identity(int n) {
  SelectionMatrix s;
  s.n_out = s.n_in = n;
  s.kept_indices.resize(n);
  std::iota(s.kept_indices.begin(), s.kept_indices.end(), 0);
  return s;
}

Mat SelectionMatrix::to_dense() const {
  Mat c(n_out, n_in);
  for (int r = 0; r < n_out; ++r) c.at(r, kept_indices[r]) = 1.0;
  return c;
}

void SelectionMatrix::validate() const {
  if (static_cast<int>(kept_indices.size()) != n_out) {
    throw StructuralError("SelectionMatrix: kept_indices length != n_out");
  }
  for (int r = 0; r < n_out; ++r) {
    if (kept_indices[r] < 0 || kept_indices[r] >= n_in) {
      throw StructuralError("SelectionMatrix: kept index out of range");
    }
    if (r > 0 && kept_indices[r] <= kept_indices[r - 1]) {
      throw StructuralError("SelectionMatrix: kept indices not strictly increasing");
    }
  }
}

NestedSampler NestedSampler::identity(int n) {
  NestedSampler d;
  d.depth = 0;
  d.selector = SelectionMatrix::identity(n);
  return d;
}

SelectionMatrix select_by_degree(const GraphShift& shift, int n_keep) {
  const int n = shift.n_nodes();
  if (n_keep < 1 || n_keep > n) {
    throw ArgumentError("select_by_degree: n_keep must be in [1, n_nodes]");
  }
  const std::vector<double> deg = shift.weighted_degrees();
  // Drop priority: smallest degree first, ties drop the larger index first.
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    if (deg[a] != deg[b]) return deg[a] < deg[b];
    return a > b;
  });
  std::vector<char> dropped(n, 0);
  for (int i = 0; i < n - n_keep; ++i) dropped[order[i]] = 1;

  SelectionMatrix sel;
  sel.n_in = n;
  sel.n_out = n_keep;
  for (int i = 0; i < n; ++i) {
    if (!dropped[i]) sel.kept_indices.push_back(i);
  }
  sel.validate();
  return sel;
}

NestedSampler compose_nested(const std::vector<SelectionMatrix>& selections, int n_nodes) {
  NestedSampler d = NestedSampler::identity(n_nodes);
  for (const auto& c : selections) {
    c.validate();
    if (c.n_in != d.selector.n_out) {
      throw StructuralError("compose_nested: dimension chain broken");
    }
    SelectionMatrix next;
    next.n_in = n_nodes;
    next.n_out = c.n_out;
    next.kept_indices.reserve(c.n_out);
    for (int r = 0; r < c.n_out; ++r) {
      next.kept_indices.push_back(d.selector.kept_indices[c.kept_indices[r]]);
    }
    next.validate();
    d.selector = std::move(next);
    ++d.depth;
  }
  return d;
}

Mat zero_pad(const NestedSampler& sampler, const Mat& x_sub) {
  if (x_sub.rows != sampler.n_sub()) {
    throw StructuralError("zero_pad: row count != sampler n_out");
  }
  Mat out(sampler.n_full(), x_sub.cols);
  for (int r = 0; r < x_sub.rows; ++r) {
    const int dst = sampler.selector.kept_indices[r];
    for (int f = 0; f < x_sub.cols; ++f) out.at(dst, f) = x_sub.at(r, f);
  }
  return out;
}

Mat downsample(const NestedSampler& sampler, const Mat& x_full) {
  if (x_full.rows != sampler.n_full()) {
    throw StructuralError("downsample: row count != sampler n_in");
  }
  Mat out(sampler.n_sub(), x_full.cols);
  for (int r = 0; r < out.rows; ++r) {
    const int src = sampler.selector.kept_indices[r];
    for (int f = 0; f < x_full.cols; ++f) out.at(r, f) = x_full.at(src, f);
  }
  return out;
}

Mat reduced_shift(const NestedSampler& sampler, const GraphShift& shift, int gamma, int k) {
  if (gamma < 1) throw ArgumentError("reduced_shift: gamma must be >= 1");
  if (k < 0) throw ArgumentError("reduced_shift: k must be >= 0");
  const int nb = sampler.n_sub();
  if (k == 0) return Mat::identity(nb);
  if (sampler.n_full() != shift.n_nodes()) {
    throw StructuralError("reduced_shift: sampler and shift disagree on n_nodes");
  }
  // Columns of D^T are unit vectors at the kept indices.
  Mat cols = zero_pad(sampler, Mat::identity(nb));
  for (int i = 0; i < gamma * k; ++i) cols = shift.apply(cols);
  return downsample(sampler, cols);
}

SelectionMatrix relative_selection(const SelectionMatrix& parent, const SelectionMatrix& child) {
  if (parent.n_in != child.n_in) {
    throw StructuralError("relative_selection: parent/child on different graphs");
  }
  SelectionMatrix rel;
  rel.n_in = parent.n_out;
  rel.n_out = child.n_out;
  rel.kept_indices.reserve(child.n_out);
  int p = 0;
  for (int c = 0; c < child.n_out; ++c) {
    const int target = child.kept_indices[c];
    while (p < parent.n_out && parent.kept_indices[p] < target) ++p;
    if (p >= parent.n_out || parent.kept_indices[p] != target) {
      throw StructuralError("relative_selection: child keeps a node the parent dropped");
    }
    rel.kept_indices.push_back(p);
  }
  rel.validate();
  return rel;
}

std::string serialize_selection(const SelectionMatrix& sel) {
  std::ostringstream os;
  for (int i = 0; i < sel.n_out; ++i) {
    if (i) os << ' ';
    os << sel.kept_indices[i];
  }
  return os.str();
}

SelectionMatrix parse_selection(const std::string& line, int n_in) {
  SelectionMatrix sel;
  sel.n_in = n_in;
  std::istringstream is(line);
  int idx;
  while (is >> idx) sel.kept_indices.push_back(idx);
  sel.n_out = static_cast<int>(sel.kept_indices.size());
  sel.validate();
  return sel;
}

}  // namespace ugnn::graph
