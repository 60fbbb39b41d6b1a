#pragma once

#include <map>
#include <string>
#include <vector>

#include "ugnn/ad/tape.hpp"
#include "ugnn/common/mat.hpp"
#include "ugnn/graph/sampling.hpp"
#include "ugnn/graph/shift.hpp"
#include "ugnn/model/config.hpp"

namespace ugnn::model {

/// The two computationally distinct but mathematically equivalent ways of
/// applying the strided sampled convolution. `reduced` precomputes the dense
/// reduced shift operators D (S^gamma)^k D^T; `zero_padded` lifts the signal
/// to the full node set, applies sparse shifts and subsamples again.
/// zero_padded is the default execution path.
enum class ConvViewpoint { reduced, zero_padded };

struct ConvSpec {
  int gamma = 1;
  Activation activation = Activation::silu;
  Normalization normalization = Normalization::none;
};

Mat apply_activation(const Mat& m, Activation a);
Mat layer_norm_eval(const Mat& m, const Mat& gain, const Mat& bias);

/// Pure (non-recorded) strided sampled graph convolution
///   out = phi( norm( sum_k [D (S^gamma)^k D^T] v H_k ) ).
/// taps holds H_0..H_K. gain/bias are required when spec.normalization is
/// layer and ignored otherwise.
Mat sampled_graph_conv(const Mat& v, const graph::GraphShift& shift,
                       const graph::NestedSampler& sampler, const std::vector<Mat>& taps,
                       const ConvSpec& spec, ConvViewpoint viewpoint,
                       const Mat* gain = nullptr, const Mat* bias = nullptr);

/// Records the zero-padded viewpoint of the same convolution on a tape.
/// tap_ids holds the node ids of H_0..H_K; gain_id/bias_id are used when
/// normalizing.
int record_sampled_conv(ad::Tape& tape, int v_id, const graph::GraphShift* shift,
                        const graph::NestedSampler& sampler, const std::vector<int>& tap_ids,
                        const ConvSpec& spec, int gain_id = -1, int bias_id = -1);

}  // namespace ugnn::model
