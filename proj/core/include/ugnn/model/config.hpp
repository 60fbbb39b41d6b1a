#pragma once

#include <string>
#include <vector>

namespace ugnn::model {

enum class Activation { relu, silu, identity };
enum class Normalization { layer, none };

Activation activation_from_string(const std::string& s);
Normalization normalization_from_string(const std::string& s);
std::string to_string(Activation a);
std::string to_string(Normalization n);

/// Architecture of the U-shaped denoiser. feature_widths holds F_0..F_B
/// (strictly decreasing), node_counts holds N_0..N_B (non-increasing with
/// N_0 = N). taps holds the filter order K_l of each of the
/// layers_per_block layers inside every block.
struct UGNNConfig {
  int depth = 3;                    // B
  int layers_per_block = 2;         // L
  std::vector<int> taps;            // K_l, size layers_per_block
  int gamma = 1;                    // shift stride
  std::vector<int> feature_widths;  // F_0..F_B
  std::vector<int> node_counts;     // N_0..N_B
  Activation activation = Activation::silu;
  Normalization normalization = Normalization::layer;
  int conditioning_width = 0;       // U, columns of the conditioning signal
  int target_width = 0;             // F, columns of the signal being denoised

  void validate() const;

  int n_nodes() const { return node_counts.empty() ? 0 : node_counts.front(); }
  int f0() const { return feature_widths.front(); }
  int bottleneck_width() const { return feature_widths.back(); }
};

}  // namespace ugnn::model
