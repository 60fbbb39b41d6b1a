#include "ugnn/model/config.hpp"

#include "ugnn/common/error.hpp"

namespace ugnn::model {

Activation activation_from_string(const std::string& s) {
  if (s == "relu") return Activation::relu;
  if (s == "silu") return Activation::silu;
  if (s == "identity") return Activation::identity;
  throw ArgumentError("unknown activation: " + s);
}

Normalization normalization_from_string(const std::string& s) {
  if (s == "layer") return Normalization::layer;
  if (s == "none") return Normalization::none;
  throw ArgumentError("unknown normalization: " + s);
}

std::string to_string(Activation a) {
  switch (a) {
    case Activation::relu: return "relu";
    case Activation::silu: return "silu";
    case Activation::identity: return "identity";
  }
  return "?";
}

std::string to_string(Normalization n) {
  return n == Normalization::layer ? "layer" : "none";
}

void UGNNConfig::validate() const {
  if (depth < 1) throw ArgumentError("UGNNConfig: depth must be >= 1");
  if (layers_per_block < 1) throw ArgumentError("UGNNConfig: layers_per_block must be >= 1");
  if (static_cast<int>(taps.size()) != layers_per_block) {
    throw ArgumentError("UGNNConfig: taps must list one K per layer");
  }
  for (int k : taps) {
    if (k < 0) throw ArgumentError("UGNNConfig: filter taps must be >= 0");
  }
  if (gamma < 1) throw ArgumentError("UGNNConfig: gamma must be >= 1");
  if (static_cast<int>(feature_widths.size()) != depth + 1) {
    throw ArgumentError("UGNNConfig: feature_widths must hold F_0..F_B");
  }
  for (std::size_t i = 1; i < feature_widths.size(); ++i) {
    if (feature_widths[i] >= feature_widths[i - 1]) {
      throw ArgumentError("UGNNConfig: feature widths must be strictly decreasing");
    }
  }
  if (feature_widths.back() < 1) throw ArgumentError("UGNNConfig: F_B must be >= 1");
  // The first-layer input splits into two halves and the time embedding needs
  // an even dimension, so F_0 must be a multiple of 4.
  if (feature_widths.front() % 4 != 0) {
    throw ArgumentError("UGNNConfig: F_0 must be divisible by 4");
  }
  if (static_cast<int>(node_counts.size()) != depth + 1) {
    throw ArgumentError("UGNNConfig: node_counts must hold N_0..N_B");
  }
  for (std::size_t i = 1; i < node_counts.size(); ++i) {
    if (node_counts[i] > node_counts[i - 1]) {
      throw ArgumentError("UGNNConfig: node counts must be non-increasing");
    }
  }
  if (node_counts.back() < 1) throw ArgumentError("UGNNConfig: N_B must be >= 1");
  if (conditioning_width < 0) throw ArgumentError("UGNNConfig: conditioning_width < 0");
  if (target_width < 1) throw ArgumentError("UGNNConfig: target_width must be >= 1");
}

}  // namespace ugnn::model
