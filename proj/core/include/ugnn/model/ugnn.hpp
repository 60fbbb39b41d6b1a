#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "ugnn/ad/param_store.hpp"
#include "ugnn/ad/tape.hpp"
#include "ugnn/graph/sampling.hpp"
#include "ugnn/graph/shift.hpp"
#include "ugnn/model/config.hpp"
#include "ugnn/model/conv.hpp"

namespace ugnn::model {

/// Per-level selection matrices C_b plus the nested samplers D_0..D_B they
/// compose to.
struct SamplerSet {
  std::vector<graph::SelectionMatrix> level;    // C_b, b = 1..B (level-relative)
  std::vector<graph::NestedSampler> nested;     // D_0..D_B (original-graph indices)
};

/// Degree-based nested node selection for the configured node counts. Degrees
/// come from the given shift and nodes with the smallest degree are dropped
/// first, so the kept sets are nested across levels by construction.
SamplerSet build_samplers(const graph::GraphShift& shift, const std::vector<int>& node_counts);

/// Sinusoidal embedding of the diffusion step, one identical row per node:
/// [sin(t w_1)..sin(t w_{dim/2}), cos(t w_1)..cos(t w_{dim/2})] with
/// w_i = 10000^(-2(i-1)/dim).
Mat time_embedding(int t, int dim, int n_rows);

/// The U-shaped graph-convolutional noise predictor eps(x_t, t; S, u).
/// Holds the architecture, the node samplers and the parameter store; the
/// shift operator is borrowed and must outlive the model.
class UGnn {
 public:
  UGnn(UGNNConfig config, const graph::GraphShift* shift, SamplerSet samplers);

  /// Convenience constructor that derives the samplers from the shift.
  UGnn(UGNNConfig config, const graph::GraphShift* shift);

  void init_params(std::uint64_t seed);

  /// Replaces the parameters; the store must carry exactly the names and
  /// shapes produced by init_params for this configuration.
  void set_params(ad::ParameterStore params);

  const UGNNConfig& config() const { return config_; }
  const SamplerSet& samplers() const { return samplers_; }
  const graph::GraphShift& shift() const { return *shift_; }
  ad::ParameterStore& params() { return params_; }
  const ad::ParameterStore& params() const { return params_; }

  /// Records the full forward pass on the tape and returns the id of the
  /// N x F output node. u_id < 0 runs the model unconditionally (only valid
  /// when conditioning_width is 0 in which case the conditioning half of the
  /// first-layer input is zero).
  int record_forward(ad::Tape& tape, const std::map<std::string, int>& param_ids, int x_id,
                     int t, int u_id) const;

  /// Owns a scratch tape; evaluates the model at the current parameters.
  Mat predict(const Mat& x_t, int t, const Mat* u) const;

  /// V_0 = [ embed_x(x) + time_embedding(t) ; embed_u(u) ]; the second half
  /// is zero for unconditional models.
  int record_input_embedding(ad::Tape& tape, const std::map<std::string, int>& param_ids,
                             int x0_id, int t, int u_id) const;

 private:
  int record_encoder_block(ad::Tape& tape, const std::map<std::string, int>& pid, int b,
                           int v_id) const;
  int record_decoder_block(ad::Tape& tape, const std::map<std::string, int>& pid, int b,
                           int y_id, int skip_id) const;
  int record_conv_stack(ad::Tape& tape, const std::map<std::string, int>& pid,
                        const std::string& prefix, const graph::NestedSampler& sampler,
                        int v_id) const;
  ConvSpec conv_spec() const;

  UGNNConfig config_;
  const graph::GraphShift* shift_;
  SamplerSet samplers_;
  ad::ParameterStore params_;
};

}  // namespace ugnn::model
