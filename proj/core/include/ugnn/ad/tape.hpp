#pragma once

#include <vector>

#include "ugnn/ad/tensor.hpp"
#include "ugnn/common/mat.hpp"
#include "ugnn/graph/shift.hpp"

namespace ugnn::ad {

enum class OpKind {
  leaf,
  matmul,
  add,            // same shape
  add_row,        // (R x C) + (1 x C), broadcast over rows
  scalar_mul,
  concat_cols,
  slice_cols,
  relu,
  silu,
  layer_norm,     // per row, learnable gain/bias
  mse,            // mean squared error, scalar output
  row_select,     // multiply by a fixed 0/1 selection matrix (D or C)
  zero_pad,       // multiply by the transpose of a fixed selection matrix
  sparse_matmul,  // multiply by a constant sparse shift operator
};

/// Recorded computation over dense matrices. Insertion order is topological
/// order; backward() walks nodes in exact reverse insertion order, so
/// gradients are bitwise deterministic. Values are immutable once recorded.
class Tape {
 public:
  /// Registers a leaf value. Returns its node id.
  int leaf(Mat value, bool requires_grad = false);
  int leaf(const Tensor& t);

  int matmul(int a, int b);
  int add(int a, int b);
  int add_row(int a, int row);
  int scalar_mul(int a, double s);
  int concat_cols(int a, int b);
  int slice_cols(int a, int c0, int c1);
  int relu(int a);
  int silu(int a);
  /// Per-row normalization with epsilon 1e-5 inside the square root; gain and
  /// bias are 1 x C leaves (typically parameters).
  int layer_norm(int a, int gain, int bias);
  int mse(int a, int b);
  int row_select(int a, std::vector<int> kept);
  int zero_pad(int a, std::vector<int> kept, int n_out);
  /// The shift operator must outlive the tape.
  int sparse_matmul(const graph::GraphShift* shift, int a);

  const Mat& value(int id) const;
  Tensor tensor(int id) const;

  /// Reverse accumulation from a scalar (1 x 1) loss node. Inputs without a
  /// path to the loss keep zero gradients.
  void backward(int loss_id);
  /// Gradient of the last backward() w.r.t. node id; zeros when off-path.
  Mat grad(int id) const;

  std::size_t size() const { return nodes_.size(); }
  void clear();

 private:
  struct Node {
    OpKind kind = OpKind::leaf;
    int in0 = -1, in1 = -1, in2 = -1;
    bool needs_grad = false;
    Mat value;
    Mat grad;  // empty until touched by backward
    // op context
    double scalar = 0.0;
    int c0 = 0, c1 = 0;
    std::vector<int> kept;
    const graph::GraphShift* shift = nullptr;
    std::vector<double> row_mu, row_inv_std;  // layer_norm saved statistics
  };

  int push(Node node);
  const Node& at(int id) const;
  void check_finite(const Mat& m, const char* op) const;
  void accumulate(int id, const Mat& g);

  std::vector<Node> nodes_;
};

}  // namespace ugnn::ad
