#include "ugnn/train/run_config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "ugnn/common/error.hpp"

namespace ugnn::train {

RunConfig RunConfig::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ArgumentError("cannot open config file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return from_text(ss.str());
}

RunConfig RunConfig::from_text(const std::string& text) {
  ConfigFile cfg = ConfigFile::parse_text(text);
  RunConfig rc;
  rc.text = text;

  rc.prices_path = cfg.get_string("data", "prices", "");
  rc.fundamentals_path = cfg.get_string("data", "fundamentals", "");
  rc.adjacency_path = cfg.get_string("data", "adjacency", "");
  rc.data.t_past = cfg.get_int("data", "t_past", rc.data.t_past);
  rc.data.t_horizon = cfg.get_int("data", "t_horizon", rc.data.t_horizon);
  rc.data.stride = cfg.get_int("data", "stride", rc.data.stride);
  rc.data.chunk_len = cfg.get_int("data", "chunk_len", rc.data.chunk_len);
  rc.data.val_ratio = cfg.get_double("data", "val_ratio", rc.data.val_ratio);
  rc.data.test_ratio = cfg.get_double("data", "test_ratio", rc.data.test_ratio);
  rc.data.features = cfg.get_string_list("data", "features", rc.data.features);
  rc.data.split_seed = cfg.get_u64("data", "split_seed", rc.data.split_seed);

  rc.depth = cfg.get_int("model", "depth", rc.depth);
  rc.layers = cfg.get_int("model", "layers", rc.layers);
  {
    std::vector<int> default_taps(rc.layers, 2);
    rc.taps = cfg.get_int_list("model", "taps", default_taps);
    if (static_cast<int>(rc.taps.size()) == 1 && rc.layers > 1) {
      rc.taps.assign(rc.layers, rc.taps.front());
    }
  }
  rc.gamma = cfg.get_int("model", "gamma", rc.gamma);
  rc.f0 = cfg.get_int("model", "f0", rc.f0);
  rc.feature_widths = cfg.get_int_list("model", "feature_widths", {});
  rc.node_counts = cfg.get_int_list("model", "node_counts", {});
  {
    std::vector<double> default_frac(rc.depth, 0.8);
    if (!default_frac.empty()) default_frac[0] = 1.0;
    rc.node_fractions = cfg.get_double_list("model", "node_fractions", default_frac);
  }
  rc.activation = model::activation_from_string(cfg.get_string("model", "activation", "silu"));
  rc.normalization =
      model::normalization_from_string(cfg.get_string("model", "normalization", "layer"));

  rc.steps = cfg.get_int("diffusion", "steps", rc.steps);
  rc.schedule_kind = cfg.get_string("diffusion", "schedule", rc.schedule_kind);
  rc.beta_min = cfg.get_double("diffusion", "beta_min", rc.beta_min);
  rc.beta_max = cfg.get_double("diffusion", "beta_max", rc.beta_max);
  rc.objective = diffusion::objective_from_string(cfg.get_string("diffusion", "objective", "eps"));

  rc.train.batch_size = cfg.get_int("train", "batch_size", rc.train.batch_size);
  rc.train.max_epochs = cfg.get_int("train", "max_epochs", rc.train.max_epochs);
  rc.train.lr_init = cfg.get_double("train", "lr_init", rc.train.lr_init);
  rc.train.opt.beta1 = cfg.get_double("train", "beta1", rc.train.opt.beta1);
  rc.train.opt.beta2 = cfg.get_double("train", "beta2", rc.train.opt.beta2);
  rc.train.opt.eps = cfg.get_double("train", "eps", rc.train.opt.eps);
  rc.train.opt.weight_decay = cfg.get_double("train", "weight_decay", rc.train.opt.weight_decay);
  rc.train.lr_min = cfg.get_double("train", "lr_min", rc.train.lr_min);
  rc.train.lr_period0 = cfg.get_int("train", "lr_period0", rc.train.lr_period0);
  rc.train.lr_period_mult = cfg.get_double("train", "lr_period_mult", rc.train.lr_period_mult);
  rc.train.patience = cfg.get_int("train", "patience", rc.train.patience);
  rc.train.seed = cfg.get_u64("train", "seed", rc.train.seed);
  rc.train.objective = rc.objective;

  rc.n_traj = cfg.get_int("sample", "n_traj", rc.n_traj);

  cfg.ensure_all_consumed();
  rc.train.validate();
  return rc;
}

diffusion::NoiseSchedule RunConfig::make_schedule() const {
  if (schedule_kind == "cosine") return diffusion::cosine_schedule(steps);
  if (schedule_kind == "linear") return diffusion::linear_schedule(steps, beta_min, beta_max);
  throw ArgumentError("unknown diffusion schedule: " + schedule_kind);
}

model::UGNNConfig RunConfig::model_config(int n_nodes, int conditioning_width,
                                          int target_width) const {
  model::UGNNConfig mc;
  mc.depth = depth;
  mc.layers_per_block = layers;
  mc.taps = taps;
  mc.gamma = gamma;
  mc.activation = activation;
  mc.normalization = normalization;
  mc.conditioning_width = conditioning_width;
  mc.target_width = target_width;

  if (!feature_widths.empty()) {
    mc.feature_widths = feature_widths;
  } else {
    mc.feature_widths.resize(depth + 1);
    int w = f0;
    for (int b = 0; b <= depth; ++b) {
      mc.feature_widths[b] = w;
      w /= 2;
    }
  }

  if (!node_counts.empty()) {
    mc.node_counts = node_counts;
  } else {
    if (static_cast<int>(node_fractions.size()) != depth) {
      throw ArgumentError("node_fractions must list one value per depth level");
    }
    mc.node_counts.resize(depth + 1);
    mc.node_counts[0] = n_nodes;
    for (int b = 1; b <= depth; ++b) {
      const int prev = mc.node_counts[b - 1];
      mc.node_counts[b] =
          std::max(1, std::min(prev, static_cast<int>(std::lround(prev * node_fractions[b - 1]))));
    }
  }
  mc.validate();
  return mc;
}

}  // namespace ugnn::train
