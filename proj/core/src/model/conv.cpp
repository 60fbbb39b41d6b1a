#include "ugnn/model/conv.hpp"

#include <cmath>

#include "ugnn/common/error.hpp"

namespace ugnn::model {

Mat apply_activation(const Mat& m, Activation a) {
  Mat out = m;
  switch (a) {
    case Activation::relu:
      for (auto& x : out.d) x = x > 0.0 ? x : 0.0;
      break;
    case Activation::silu:
      for (auto& x : out.d) x = x / (1.0 + std::exp(-x));
      break;
    case Activation::identity:
      break;
  }
  return out;
}

Mat layer_norm_eval(const Mat& m, const Mat& gain, const Mat& bias) {
  constexpr double eps = 1e-5;  // matches the tape's layer_norm
  Mat out(m.rows, m.cols);
  const double c = static_cast<double>(m.cols);
  for (int i = 0; i < m.rows; ++i) {
    double mu = 0.0;
    for (int j = 0; j < m.cols; ++j) mu += m.at(i, j);
    mu /= c;
    double var = 0.0;
    for (int j = 0; j < m.cols; ++j) {
      const double dev = m.at(i, j) - mu;
      var += dev * dev;
    }
    var /= c;
    const double inv_std = 1.0 / std::sqrt(var + eps);
    for (int j = 0; j < m.cols; ++j) {
      out.at(i, j) = (m.at(i, j) - mu) * inv_std * gain.at(0, j) + bias.at(0, j);
    }
  }
  return out;
}

namespace {

Mat finish(Mat acc, const ConvSpec& spec, const Mat* gain, const Mat* bias) {
  if (spec.normalization == Normalization::layer) {
    if (gain == nullptr || bias == nullptr) {
      throw ContractViolation("sampled_graph_conv: layer norm requires gain and bias");
    }
    acc = layer_norm_eval(acc, *gain, *bias);
  }
  return apply_activation(acc, spec.activation);
}

}  // namespace

Mat sampled_graph_conv(const Mat& v, const graph::GraphShift& shift,
                       const graph::NestedSampler& sampler, const std::vector<Mat>& taps,
                       const ConvSpec& spec, ConvViewpoint viewpoint, const Mat* gain,
                       const Mat* bias) {
  if (taps.empty()) throw ArgumentError("sampled_graph_conv: need at least H_0");
  if (v.rows != sampler.n_sub()) {
    throw StructuralError("sampled_graph_conv: input rows != sampler n_out");
  }
  if (spec.gamma < 1) throw ArgumentError("sampled_graph_conv: gamma must be >= 1");
  const int K = static_cast<int>(taps.size()) - 1;

  Mat acc;
  if (viewpoint == ConvViewpoint::reduced) {
    acc = matmul(v, taps[0]);  // k = 0: D D^T = I
    for (int k = 1; k <= K; ++k) {
      const Mat rk = graph::reduced_shift(sampler, shift, spec.gamma, k);
      acc = add(acc, matmul(matmul(rk, v), taps[k]));
    }
  } else {
    acc = matmul(v, taps[0]);
    Mat cur = graph::zero_pad(sampler, v);
    for (int k = 1; k <= K; ++k) {
      for (int g = 0; g < spec.gamma; ++g) cur = shift.apply(cur);
      acc = add(acc, matmul(graph::downsample(sampler, cur), taps[k]));
    }
  }
  return finish(std::move(acc), spec, gain, bias);
}

int record_sampled_conv(ad::Tape& tape, int v_id, const graph::GraphShift* shift,
                        const graph::NestedSampler& sampler, const std::vector<int>& tap_ids,
                        const ConvSpec& spec, int gain_id, int bias_id) {
  if (tap_ids.empty()) throw ArgumentError("record_sampled_conv: need at least H_0");
  if (tape.value(v_id).rows != sampler.n_sub()) {
    throw StructuralError("record_sampled_conv: input rows != sampler n_out");
  }
  const int K = static_cast<int>(tap_ids.size()) - 1;
  const auto& kept = sampler.selector.kept_indices;

  int acc = tape.matmul(v_id, tap_ids[0]);
  if (K > 0) {
    int cur = tape.zero_pad(v_id, kept, sampler.n_full());
    for (int k = 1; k <= K; ++k) {
      for (int g = 0; g < spec.gamma; ++g) cur = tape.sparse_matmul(shift, cur);
      const int sub = tape.row_select(cur, kept);
      acc = tape.add(acc, tape.matmul(sub, tap_ids[k]));
    }
  }
  if (spec.normalization == Normalization::layer) {
    if (gain_id < 0 || bias_id < 0) {
      throw ContractViolation("record_sampled_conv: layer norm requires gain and bias ids");
    }
    acc = tape.layer_norm(acc, gain_id, bias_id);
  }
  switch (spec.activation) {
    case Activation::relu: return tape.relu(acc);
    case Activation::silu: return tape.silu(acc);
    case Activation::identity: return acc;
  }
  throw ContractViolation("record_sampled_conv: unknown activation");
}

}  // namespace ugnn::model
