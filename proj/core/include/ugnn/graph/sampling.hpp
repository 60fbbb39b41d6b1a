#pragma once

#include <string>
#include <vector>

#include "ugnn/common/mat.hpp"
#include "ugnn/graph/shift.hpp"

namespace ugnn::graph {

/// Binary fat selection matrix C in {0,1}^{n_out x n_in}. Every row holds a
/// single 1 and every column at most one; kept_indices lists the selected
/// input indices in strictly increasing order, so row r of C picks input
/// kept_indices[r].
struct SelectionMatrix {
  int n_out = 0;
  int n_in = 0;
  std::vector<int> kept_indices;

  static SelectionMatrix identity(int n);
  Mat to_dense() const;
  void validate() const;
};

/// Nested sampling matrix D_b = C_b ... C_1 tracking which original nodes
/// survive at depth b. selector maps the original n_in = N_0 nodes to the
/// n_out = N_b survivors; D D^T = I by construction.
struct NestedSampler {
  int depth = 0;
  SelectionMatrix selector;

  int n_full() const { return selector.n_in; }
  int n_sub() const { return selector.n_out; }
  bool is_identity() const { return selector.n_out == selector.n_in; }

  static NestedSampler identity(int n);
};

/// Keeps the n_keep nodes with the largest weighted degree. Degrees are
/// computed once on the given shift and not recomputed between drops; ties
/// are broken by dropping the larger node index first.
SelectionMatrix select_by_degree(const GraphShift& shift, int n_keep);

/// D_b = C_b C_{b-1} ... C_1. An empty list yields the identity sampler on
/// n_nodes (depth 0). Dimension chains are verified.
NestedSampler compose_nested(const std::vector<SelectionMatrix>& selections, int n_nodes);

/// X~ = D^T X_b: rows of x_sub land at their original indices, dropped rows
/// are exactly zero.
Mat zero_pad(const NestedSampler& sampler, const Mat& x_sub);

/// Row extraction at the kept indices; left inverse of zero_pad.
Mat downsample(const NestedSampler& sampler, const Mat& x_full);

/// Reduced shift operator D (S^gamma)^k D^T as a dense n_sub x n_sub matrix,
/// computed by gamma*k sparse applications of S to the columns of D^T.
Mat reduced_shift(const NestedSampler& sampler, const GraphShift& shift, int gamma, int k);

/// Relative selection of child within parent: both are kept-index sets on the
/// same original graph with child a subset of parent; the result maps
/// parent-local row indices to child-local rows.
SelectionMatrix relative_selection(const SelectionMatrix& parent, const SelectionMatrix& child);

/// One line of space-separated kept indices.
std::string serialize_selection(const SelectionMatrix& sel);
SelectionMatrix parse_selection(const std::string& line, int n_in);

}  // namespace ugnn::graph
