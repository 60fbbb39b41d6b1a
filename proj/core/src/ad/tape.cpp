#include "ugnn/ad/tape.hpp"

#include <cmath>

#include "ugnn/common/error.hpp"

namespace ugnn::ad {

namespace {
constexpr double kLayerNormEps = 1e-5;

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }
}  // namespace

int Tape::push(Node node) {
  nodes_.push_back(std::move(node));
  return static_cast<int>(nodes_.size()) - 1;
}

const Tape::Node& Tape::at(int id) const {
  if (id < 0 || id >= static_cast<int>(nodes_.size())) {
    throw ContractViolation("Tape: node id out of range");
  }
  return nodes_[id];
}

void Tape::check_finite(const Mat& m, const char* op) const {
  if (!m.all_finite()) {
    throw NumericError(std::string("non-finite value produced by op ") + op);
  }
}

int Tape::leaf(Mat value, bool requires_grad) {
  check_finite(value, "leaf");
  Node n;
  n.kind = OpKind::leaf;
  n.needs_grad = requires_grad;
  n.value = std::move(value);
  return push(std::move(n));
}

int Tape::leaf(const Tensor& t) { return leaf(t.value, t.requires_grad); }

int Tape::matmul(int a, int b) {
  const Mat& av = at(a).value;
  const Mat& bv = at(b).value;
  if (av.cols != bv.rows) throw StructuralError("tape matmul: inner dimensions differ");
  Node n;
  n.kind = OpKind::matmul;
  n.in0 = a;
  n.in1 = b;
  n.needs_grad = at(a).needs_grad || at(b).needs_grad;
  n.value = ugnn::matmul(av, bv);
  check_finite(n.value, "matmul");
  return push(std::move(n));
}

int Tape::add(int a, int b) {
  const Mat& av = at(a).value;
  const Mat& bv = at(b).value;
  if (!av.same_shape(bv)) throw StructuralError("tape add: shape mismatch");
  Node n;
  n.kind = OpKind::add;
  n.in0 = a;
  n.in1 = b;
  n.needs_grad = at(a).needs_grad || at(b).needs_grad;
  n.value = ugnn::add(av, bv);
  check_finite(n.value, "add");
  return push(std::move(n));
}

int Tape::add_row(int a, int row) {
  const Mat& av = at(a).value;
  const Mat& rv = at(row).value;
  if (rv.rows != 1 || rv.cols != av.cols) {
    throw StructuralError("tape add_row: row operand must be 1 x cols");
  }
  Node n;
  n.kind = OpKind::add_row;
  n.in0 = a;
  n.in1 = row;
  n.needs_grad = at(a).needs_grad || at(row).needs_grad;
  n.value = av;
  for (int i = 0; i < av.rows; ++i)
    for (int j = 0; j < av.cols; ++j) n.value.at(i, j) += rv.at(0, j);
  check_finite(n.value, "add_row");
  return push(std::move(n));
}

int Tape::scalar_mul(int a, double s) {
  Node n;
  n.kind = OpKind::scalar_mul;
  n.in0 = a;
  n.scalar = s;
  n.needs_grad = at(a).needs_grad;
  n.value = ugnn::scale(at(a).value, s);
  check_finite(n.value, "scalar_mul");
  return push(std::move(n));
}

int Tape::concat_cols(int a, int b) {
  Node n;
  n.kind = OpKind::concat_cols;
  n.in0 = a;
  n.in1 = b;
  n.needs_grad = at(a).needs_grad || at(b).needs_grad;
  n.value = ugnn::concat_cols(at(a).value, at(b).value);
  n.c0 = at(a).value.cols;
  check_finite(n.value, "concat_cols");
  return push(std::move(n));
}

int Tape::slice_cols(int a, int c0, int c1) {
  Node n;
  n.kind = OpKind::slice_cols;
  n.in0 = a;
  n.c0 = c0;
  n.c1 = c1;
  n.needs_grad = at(a).needs_grad;
  n.value = ugnn::slice_cols(at(a).value, c0, c1);
  check_finite(n.value, "slice_cols");
  return push(std::move(n));
}

int Tape::relu(int a) {
  Node n;
  n.kind = OpKind::relu;
  n.in0 = a;
  n.needs_grad = at(a).needs_grad;
  n.value = at(a).value;
  for (auto& x : n.value.d) x = x > 0.0 ? x : 0.0;
  check_finite(n.value, "relu");
  return push(std::move(n));
}

int Tape::silu(int a) {
  Node n;
  n.kind = OpKind::silu;
  n.in0 = a;
  n.needs_grad = at(a).needs_grad;
  n.value = at(a).value;
  for (auto& x : n.value.d) x = x * sigmoid(x);
  check_finite(n.value, "silu");
  return push(std::move(n));
}

int Tape::layer_norm(int a, int gain, int bias) {
  const Mat& av = at(a).value;
  const Mat& gv = at(gain).value;
  const Mat& bv = at(bias).value;
  if (gv.rows != 1 || gv.cols != av.cols || bv.rows != 1 || bv.cols != av.cols) {
    throw StructuralError("tape layer_norm: gain/bias must be 1 x cols");
  }
  Node n;
  n.kind = OpKind::layer_norm;
  n.in0 = a;
  n.in1 = gain;
  n.in2 = bias;
  n.needs_grad = at(a).needs_grad || at(gain).needs_grad || at(bias).needs_grad;
  n.value = Mat(av.rows, av.cols);
  n.row_mu.resize(av.rows);
  n.row_inv_std.resize(av.rows);
  const double c = static_cast<double>(av.cols);
  for (int i = 0; i < av.rows; ++i) {
    double mu = 0.0;
    for (int j = 0; j < av.cols; ++j) mu += av.at(i, j);
    mu /= c;
    double var = 0.0;
    for (int j = 0; j < av.cols; ++j) {
      const double dev = av.at(i, j) - mu;
      var += dev * dev;
    }
    var /= c;
    const double inv_std = 1.0 / std::sqrt(var + kLayerNormEps);
    n.row_mu[i] = mu;
    n.row_inv_std[i] = inv_std;
    for (int j = 0; j < av.cols; ++j) {
      const double xhat = (av.at(i, j) - mu) * inv_std;
      n.value.at(i, j) = xhat * gv.at(0, j) + bv.at(0, j);
    }
  }
  check_finite(n.value, "layer_norm");
  return push(std::move(n));
}

int Tape::mse(int a, int b) {
  const Mat& av = at(a).value;
  const Mat& bv = at(b).value;
  if (!av.same_shape(bv)) throw StructuralError("tape mse: shape mismatch");
  Node n;
  n.kind = OpKind::mse;
  n.in0 = a;
  n.in1 = b;
  n.needs_grad = at(a).needs_grad || at(b).needs_grad;
  double s = 0.0;
  for (std::size_t i = 0; i < av.d.size(); ++i) {
    const double diff = av.d[i] - bv.d[i];
    s += diff * diff;
  }
  n.value = Mat(1, 1);
  n.value.at(0, 0) = s / static_cast<double>(av.d.size());
  check_finite(n.value, "mse");
  return push(std::move(n));
}

int Tape::row_select(int a, std::vector<int> kept) {
  const Mat& av = at(a).value;
  for (int idx : kept) {
    if (idx < 0 || idx >= av.rows) throw StructuralError("tape row_select: index out of range");
  }
  Node n;
  n.kind = OpKind::row_select;
  n.in0 = a;
  n.needs_grad = at(a).needs_grad;
  n.kept = std::move(kept);
  n.value = Mat(static_cast<int>(n.kept.size()), av.cols);
  for (int r = 0; r < n.value.rows; ++r)
    for (int j = 0; j < av.cols; ++j) n.value.at(r, j) = av.at(n.kept[r], j);
  check_finite(n.value, "row_select");
  return push(std::move(n));
}

int Tape::zero_pad(int a, std::vector<int> kept, int n_out) {
  const Mat& av = at(a).value;
  if (static_cast<int>(kept.size()) != av.rows) {
    throw StructuralError("tape zero_pad: kept size != input rows");
  }
  for (int idx : kept) {
    if (idx < 0 || idx >= n_out) throw StructuralError("tape zero_pad: index out of range");
  }
  Node n;
  n.kind = OpKind::zero_pad;
  n.in0 = a;
  n.needs_grad = at(a).needs_grad;
  n.kept = std::move(kept);
  n.value = Mat(n_out, av.cols);
  for (int r = 0; r < av.rows; ++r)
    for (int j = 0; j < av.cols; ++j) n.value.at(n.kept[r], j) = av.at(r, j);
  check_finite(n.value, "zero_pad");
  return push(std::move(n));
}

int Tape::sparse_matmul(const graph::GraphShift* shift, int a) {
  if (shift == nullptr) throw ContractViolation("tape sparse_matmul: null shift");
  Node n;
  n.kind = OpKind::sparse_matmul;
  n.in0 = a;
  n.shift = shift;
  n.needs_grad = at(a).needs_grad;
  n.value = shift->apply(at(a).value);
  check_finite(n.value, "sparse_matmul");
  return push(std::move(n));
}

const Mat& Tape::value(int id) const { return at(id).value; }

Tensor Tape::tensor(int id) const {
  Tensor t(at(id).value, at(id).needs_grad);
  t.node_id = id;
  return t;
}

void Tape::accumulate(int id, const Mat& g) {
  Node& n = nodes_[id];
  if (!n.needs_grad) return;
  if (n.grad.d.empty()) n.grad = Mat(n.value.rows, n.value.cols);
  for (std::size_t i = 0; i < g.d.size(); ++i) n.grad.d[i] += g.d[i];
}

Mat Tape::grad(int id) const {
  const Node& n = at(id);
  if (n.grad.d.empty()) return Mat(n.value.rows, n.value.cols);
  return n.grad;
}

void Tape::backward(int loss_id) {
  const Node& loss = at(loss_id);
  if (loss.value.rows != 1 || loss.value.cols != 1) {
    throw ContractViolation("Tape::backward: loss must be a 1 x 1 scalar");
  }
  for (auto& n : nodes_) n.grad = Mat();
  if (!loss.needs_grad) return;  // loss independent of every trainable leaf
  {
    Mat seed(1, 1);
    seed.at(0, 0) = 1.0;
    accumulate(loss_id, seed);
  }

  for (int id = loss_id; id >= 0; --id) {
    Node& n = nodes_[id];
    if (!n.needs_grad || n.grad.d.empty()) continue;
    const Mat& g = n.grad;
    switch (n.kind) {
      case OpKind::leaf:
        break;
      case OpKind::matmul: {
        const Mat& av = nodes_[n.in0].value;
        const Mat& bv = nodes_[n.in1].value;
        if (nodes_[n.in0].needs_grad) accumulate(n.in0, ugnn::matmul(g, transpose(bv)));
        if (nodes_[n.in1].needs_grad) accumulate(n.in1, ugnn::matmul(transpose(av), g));
        break;
      }
      case OpKind::add:
        accumulate(n.in0, g);
        accumulate(n.in1, g);
        break;
      case OpKind::add_row: {
        accumulate(n.in0, g);
        if (nodes_[n.in1].needs_grad) {
          Mat gr(1, g.cols);
          for (int i = 0; i < g.rows; ++i)
            for (int j = 0; j < g.cols; ++j) gr.at(0, j) += g.at(i, j);
          accumulate(n.in1, gr);
        }
        break;
      }
      case OpKind::scalar_mul:
        accumulate(n.in0, ugnn::scale(g, n.scalar));
        break;
      case OpKind::concat_cols: {
        if (nodes_[n.in0].needs_grad) accumulate(n.in0, ugnn::slice_cols(g, 0, n.c0));
        if (nodes_[n.in1].needs_grad) accumulate(n.in1, ugnn::slice_cols(g, n.c0, g.cols));
        break;
      }
      case OpKind::slice_cols: {
        if (nodes_[n.in0].needs_grad) {
          const Mat& av = nodes_[n.in0].value;
          Mat ga(av.rows, av.cols);
          for (int i = 0; i < g.rows; ++i)
            for (int j = 0; j < g.cols; ++j) ga.at(i, n.c0 + j) = g.at(i, j);
          accumulate(n.in0, ga);
        }
        break;
      }
      case OpKind::relu: {
        const Mat& av = nodes_[n.in0].value;
        Mat ga = g;
        for (std::size_t i = 0; i < ga.d.size(); ++i) {
          if (av.d[i] <= 0.0) ga.d[i] = 0.0;
        }
        accumulate(n.in0, ga);
        break;
      }
      case OpKind::silu: {
        const Mat& av = nodes_[n.in0].value;
        Mat ga = g;
        for (std::size_t i = 0; i < ga.d.size(); ++i) {
          const double s = sigmoid(av.d[i]);
          ga.d[i] *= s * (1.0 + av.d[i] * (1.0 - s));
        }
        accumulate(n.in0, ga);
        break;
      }
      case OpKind::layer_norm: {
        const Mat& av = nodes_[n.in0].value;
        const Mat& gv = nodes_[n.in1].value;
        const double c = static_cast<double>(av.cols);
        if (nodes_[n.in1].needs_grad || nodes_[n.in2].needs_grad) {
          Mat ggain(1, av.cols), gbias(1, av.cols);
          for (int i = 0; i < av.rows; ++i) {
            for (int j = 0; j < av.cols; ++j) {
              const double xhat = (av.at(i, j) - n.row_mu[i]) * n.row_inv_std[i];
              ggain.at(0, j) += g.at(i, j) * xhat;
              gbias.at(0, j) += g.at(i, j);
            }
          }
          if (nodes_[n.in1].needs_grad) accumulate(n.in1, ggain);
          if (nodes_[n.in2].needs_grad) accumulate(n.in2, gbias);
        }
        if (nodes_[n.in0].needs_grad) {
          Mat ga(av.rows, av.cols);
          for (int i = 0; i < av.rows; ++i) {
            const double inv_std = n.row_inv_std[i];
            double sum_dxhat = 0.0, sum_dxhat_xhat = 0.0;
            for (int j = 0; j < av.cols; ++j) {
              const double dxhat = g.at(i, j) * gv.at(0, j);
              const double xhat = (av.at(i, j) - n.row_mu[i]) * inv_std;
              sum_dxhat += dxhat;
              sum_dxhat_xhat += dxhat * xhat;
            }
            for (int j = 0; j < av.cols; ++j) {
              const double dxhat = g.at(i, j) * gv.at(0, j);
              const double xhat = (av.at(i, j) - n.row_mu[i]) * inv_std;
              ga.at(i, j) =
                  inv_std * (dxhat - sum_dxhat / c - xhat * sum_dxhat_xhat / c);
            }
          }
          accumulate(n.in0, ga);
        }
        break;
      }
      case OpKind::mse: {
        const Mat& av = nodes_[n.in0].value;
        const Mat& bv = nodes_[n.in1].value;
        const double scale = 2.0 * g.at(0, 0) / static_cast<double>(av.d.size());
        if (nodes_[n.in0].needs_grad) {
          Mat ga(av.rows, av.cols);
          for (std::size_t i = 0; i < av.d.size(); ++i) ga.d[i] = scale * (av.d[i] - bv.d[i]);
          accumulate(n.in0, ga);
        }
        if (nodes_[n.in1].needs_grad) {
          Mat gb(bv.rows, bv.cols);
          for (std::size_t i = 0; i < bv.d.size(); ++i) gb.d[i] = -scale * (av.d[i] - bv.d[i]);
          accumulate(n.in1, gb);
        }
        break;
      }
      case OpKind::row_select: {
        if (nodes_[n.in0].needs_grad) {
          const Mat& av = nodes_[n.in0].value;
          Mat ga(av.rows, av.cols);
          for (int r = 0; r < g.rows; ++r)
            for (int j = 0; j < g.cols; ++j) ga.at(n.kept[r], j) += g.at(r, j);
          accumulate(n.in0, ga);
        }
        break;
      }
      case OpKind::zero_pad: {
        if (nodes_[n.in0].needs_grad) {
          const Mat& av = nodes_[n.in0].value;
          Mat ga(av.rows, av.cols);
          for (int r = 0; r < av.rows; ++r)
            for (int j = 0; j < g.cols; ++j) ga.at(r, j) = g.at(n.kept[r], j);
          accumulate(n.in0, ga);
        }
        break;
      }
      case OpKind::sparse_matmul: {
        // The shift operator is symmetric, so the adjoint is another apply.
        if (nodes_[n.in0].needs_grad) accumulate(n.in0, n.shift->apply(g));
        break;
      }
      default:
        throw ContractViolation("Tape::backward: unknown op kind");
    }
  }
}

void Tape::clear() { nodes_.clear(); }

}  // namespace ugnn::ad
