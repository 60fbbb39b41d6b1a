#pragma once

#include <string>
#include <vector>

#include "ugnn/diffusion/process.hpp"
#include "ugnn/diffusion/schedule.hpp"
#include "ugnn/market/windows.hpp"
#include "ugnn/model/config.hpp"
#include "ugnn/train/config_file.hpp"
#include "ugnn/train/trainer.hpp"

namespace ugnn::train {

/// Typed view of a full run configuration file with sections [data], [model],
/// [diffusion], [train] and [sample]. Every key is validated; unknown keys
/// are rejected. Defaults follow the reference experiment configuration
/// (depth 3, two 2-tap layers per block, F_0 = 64 halved per depth, cosine
/// schedule with T = 500, batch 64, AdamW at 2e-2).
struct RunConfig {
  std::string text;  // original file contents, embedded in checkpoints

  // [data]
  std::string prices_path;
  std::string fundamentals_path;  // one of fundamentals/adjacency required
  std::string adjacency_path;
  market::DatasetConfig data;

  // [model]
  int depth = 3;
  int layers = 2;
  std::vector<int> taps = {2, 2};
  int gamma = 1;
  int f0 = 64;
  std::vector<int> feature_widths;    // optional explicit F_0..F_B
  std::vector<double> node_fractions; // N_b = round(N_{b-1} * frac_b), b = 1..B
  std::vector<int> node_counts;       // optional explicit N_0..N_B
  model::Activation activation = model::Activation::silu;
  model::Normalization normalization = model::Normalization::layer;

  // [diffusion]
  int steps = 500;
  std::string schedule_kind = "cosine";  // or "linear"
  double beta_min = 1e-4;
  double beta_max = 0.02;
  diffusion::Objective objective = diffusion::Objective::eps_pred;

  // [train]
  TrainConfig train;

  // [sample]
  int n_traj = 20;

  static RunConfig from_file(const std::string& path);
  static RunConfig from_text(const std::string& text);

  diffusion::NoiseSchedule make_schedule() const;
  /// Resolves widths and node counts for a concrete graph size.
  model::UGNNConfig model_config(int n_nodes, int conditioning_width, int target_width) const;
};

}  // namespace ugnn::train
