#include "ugnn/model/ugnn.hpp"

#include <cmath>

#include "ugnn/common/error.hpp"
#include "ugnn/common/rng.hpp"

namespace ugnn::model {

SamplerSet build_samplers(const graph::GraphShift& shift, const std::vector<int>& node_counts) {
  if (node_counts.empty() || node_counts.front() != shift.n_nodes()) {
    throw StructuralError("build_samplers: N_0 must equal the graph size");
  }
  SamplerSet out;
  std::vector<graph::SelectionMatrix> absolute;  // kept sets on the original graph
  absolute.push_back(graph::SelectionMatrix::identity(shift.n_nodes()));
  out.nested.push_back(graph::NestedSampler::identity(shift.n_nodes()));
  for (std::size_t b = 1; b < node_counts.size(); ++b) {
    absolute.push_back(graph::select_by_degree(shift, node_counts[b]));
    out.level.push_back(graph::relative_selection(absolute[b - 1], absolute[b]));
    out.nested.push_back(graph::compose_nested(out.level, shift.n_nodes()));
  }
  return out;
}

Mat time_embedding(int t, int dim, int n_rows) {
  if (dim <= 0 || dim % 2 != 0) throw ArgumentError("time_embedding: dim must be even");
  if (t < 0) throw ArgumentError("time_embedding: t must be >= 0");
  Mat out(n_rows, dim);
  const int half = dim / 2;
  for (int i = 0; i < half; ++i) {
    const double omega = std::pow(10000.0, -2.0 * i / static_cast<double>(dim));
    const double s = std::sin(t * omega);
    const double c = std::cos(t * omega);
    for (int r = 0; r < n_rows; ++r) {
      out.at(r, i) = s;
      out.at(r, half + i) = c;
    }
  }
  return out;
}

UGnn::UGnn(UGNNConfig config, const graph::GraphShift* shift, SamplerSet samplers)
    : config_(std::move(config)), shift_(shift), samplers_(std::move(samplers)) {
  config_.validate();
  if (shift_ == nullptr) throw ContractViolation("UGnn: null shift");
  if (static_cast<int>(samplers_.nested.size()) != config_.depth + 1) {
    throw StructuralError("UGnn: sampler count must be depth + 1");
  }
  for (int b = 0; b <= config_.depth; ++b) {
    if (samplers_.nested[b].n_sub() != config_.node_counts[b]) {
      throw StructuralError("UGnn: sampler sizes disagree with node_counts");
    }
  }
}

UGnn::UGnn(UGNNConfig config, const graph::GraphShift* shift)
    : config_(std::move(config)), shift_(shift) {
  config_.validate();
  if (shift_ == nullptr) throw ContractViolation("UGnn: null shift");
  samplers_ = build_samplers(*shift_, config_.node_counts);
}

namespace {

void fill_normal_scaled(Mat& m, RngStream& rng, double std) {
  for (auto& x : m.d) x = rng.normal() * std;
}

}  // namespace

void UGnn::init_params(std::uint64_t seed) {
  params_ = ad::ParameterStore();
  RngStream rng(seed, /*stream=*/0x0d0d);
  const auto& cfg = config_;
  const int f0 = cfg.f0();
  const int half = f0 / 2;

  auto add_linear = [&](const std::string& name, int in, int out) {
    Mat w(in, out);
    fill_normal_scaled(w, rng, 1.0 / std::sqrt(static_cast<double>(in)));
    params_.insert(name + ".W", std::move(w));
    params_.insert(name + ".b", Mat(1, out));
  };
  auto add_conv_layer = [&](const std::string& prefix, int w_in, int w_out, int K) {
    for (int k = 0; k <= K; ++k) {
      Mat h(w_in, w_out);
      fill_normal_scaled(h, rng, 1.0 / std::sqrt(static_cast<double>(w_in * (K + 1))));
      params_.insert(prefix + ".H" + std::to_string(k), std::move(h));
    }
    if (cfg.normalization == Normalization::layer) {
      params_.insert(prefix + ".ln_g", Mat::full(1, w_out, 1.0));
      params_.insert(prefix + ".ln_b", Mat(1, w_out));
    }
  };
  auto add_block = [&](const std::string& side, int b, int w_in_first, int w_out) {
    for (int l = 0; l < cfg.layers_per_block; ++l) {
      const int w_in = l == 0 ? w_in_first : w_out;
      add_conv_layer(side + "." + std::to_string(b) + ".conv" + std::to_string(l), w_in,
                     w_out, cfg.taps[l]);
    }
  };

  add_linear("read_in", cfg.target_width, f0);
  add_linear("embed_x", f0, half);
  if (cfg.conditioning_width > 0) add_linear("embed_u", cfg.conditioning_width, half);
  for (int b = 1; b <= cfg.depth; ++b) {
    add_block("enc", b, cfg.feature_widths[b - 1], cfg.feature_widths[b]);
  }
  const int fb = cfg.bottleneck_width();
  add_linear("bottleneck.0", fb, fb);
  add_linear("bottleneck.1", fb, fb);
  for (int b = cfg.depth; b >= 1; --b) {
    add_block("dec", b, 2 * cfg.feature_widths[b], cfg.feature_widths[b - 1]);
  }
  add_linear("read_out", f0, cfg.target_width);
}

void UGnn::set_params(ad::ParameterStore params) {
  if (params_.size() == 0) init_params(0);
  if (params.size() != params_.size()) {
    throw StructuralError("UGnn::set_params: parameter count mismatch");
  }
  for (const auto& [name, t] : params_) {
    if (!params.contains(name)) {
      throw StructuralError("UGnn::set_params: missing parameter " + name);
    }
    const Mat& incoming = params.at(name);
    if (incoming.rows != t.value.rows || incoming.cols != t.value.cols) {
      throw StructuralError("UGnn::set_params: shape mismatch for " + name);
    }
  }
  params_ = std::move(params);
}

ConvSpec UGnn::conv_spec() const {
  ConvSpec spec;
  spec.gamma = config_.gamma;
  spec.activation = config_.activation;
  spec.normalization = config_.normalization;
  return spec;
}

int UGnn::record_input_embedding(ad::Tape& tape, const std::map<std::string, int>& pid,
                                 int x0_id, int t, int u_id) const {
  const int n = config_.n_nodes();
  const int half = config_.f0() / 2;

  int left = tape.matmul(x0_id, pid.at("embed_x.W"));
  left = tape.add_row(left, pid.at("embed_x.b"));
  const int te = tape.leaf(time_embedding(t, half, n));
  left = tape.add(left, te);

  int right;
  if (config_.conditioning_width > 0) {
    if (u_id < 0) {
      throw ContractViolation("UGnn: conditioning signal required but missing");
    }
    right = tape.matmul(u_id, pid.at("embed_u.W"));
    right = tape.add_row(right, pid.at("embed_u.b"));
  } else {
    right = tape.leaf(Mat(n, half));
  }
  return tape.concat_cols(left, right);
}

int UGnn::record_conv_stack(ad::Tape& tape, const std::map<std::string, int>& pid,
                            const std::string& prefix, const graph::NestedSampler& sampler,
                            int v_id) const {
  const ConvSpec spec = conv_spec();
  int v = v_id;
  for (int l = 0; l < config_.layers_per_block; ++l) {
    const std::string lp = prefix + ".conv" + std::to_string(l);
    std::vector<int> tap_ids;
    tap_ids.reserve(config_.taps[l] + 1);
    for (int k = 0; k <= config_.taps[l]; ++k) {
      tap_ids.push_back(pid.at(lp + ".H" + std::to_string(k)));
    }
    int gain = -1, bias = -1;
    if (config_.normalization == Normalization::layer) {
      gain = pid.at(lp + ".ln_g");
      bias = pid.at(lp + ".ln_b");
    }
    v = record_sampled_conv(tape, v, shift_, sampler, tap_ids, spec, gain, bias);
  }
  return v;
}

int UGnn::record_encoder_block(ad::Tape& tape, const std::map<std::string, int>& pid, int b,
                               int v_id) const {
  const auto& c = samplers_.level[b - 1];
  int v = tape.row_select(v_id, c.kept_indices);
  return record_conv_stack(tape, pid, "enc." + std::to_string(b), samplers_.nested[b], v);
}

int UGnn::record_decoder_block(ad::Tape& tape, const std::map<std::string, int>& pid, int b,
                               int y_id, int skip_id) const {
  const auto& c = samplers_.level[b - 1];
  int v = tape.concat_cols(y_id, skip_id);
  v = tape.zero_pad(v, c.kept_indices, c.n_in);
  return record_conv_stack(tape, pid, "dec." + std::to_string(b), samplers_.nested[b - 1], v);
}

int UGnn::record_forward(ad::Tape& tape, const std::map<std::string, int>& pid, int x_id,
                         int t, int u_id) const {
  const Mat& x = tape.value(x_id);
  if (x.rows != config_.n_nodes() || x.cols != config_.target_width) {
    throw StructuralError("UGnn: input signal has the wrong shape");
  }
  if (config_.conditioning_width > 0) {
    if (u_id < 0) throw ContractViolation("UGnn: conditioning signal required but missing");
    const Mat& u = tape.value(u_id);
    if (u.rows != config_.n_nodes() || u.cols != config_.conditioning_width) {
      throw StructuralError("UGnn: conditioning signal has the wrong shape");
    }
  }

  int v = tape.matmul(x_id, pid.at("read_in.W"));
  v = tape.add_row(v, pid.at("read_in.b"));
  v = record_input_embedding(tape, pid, v, t, u_id);

  std::vector<int> skips(config_.depth + 1, -1);
  for (int b = 1; b <= config_.depth; ++b) {
    v = record_encoder_block(tape, pid, b, v);
    skips[b] = v;
  }

  // Bottleneck: per-node dimension-preserving MLP on X_B.
  int y = tape.matmul(v, pid.at("bottleneck.0.W"));
  y = tape.add_row(y, pid.at("bottleneck.0.b"));
  switch (config_.activation) {
    case Activation::relu: y = tape.relu(y); break;
    case Activation::silu: y = tape.silu(y); break;
    case Activation::identity: break;
  }
  y = tape.matmul(y, pid.at("bottleneck.1.W"));
  y = tape.add_row(y, pid.at("bottleneck.1.b"));

  for (int b = config_.depth; b >= 1; --b) {
    y = record_decoder_block(tape, pid, b, y, skips[b]);
  }

  y = tape.matmul(y, pid.at("read_out.W"));
  return tape.add_row(y, pid.at("read_out.b"));
}

Mat UGnn::predict(const Mat& x_t, int t, const Mat* u) const {
  ad::Tape tape;
  auto pid = params_.bind(tape);
  const int x_id = tape.leaf(x_t);
  const int u_id = u != nullptr ? tape.leaf(*u) : -1;
  const int out = record_forward(tape, pid, x_id, t, u_id);
  return tape.value(out);
}

}  // namespace ugnn::model
