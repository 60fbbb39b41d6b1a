#pragma once

#include <cstdint>
#include <map>
#include <string>

#include "ugnn/ad/param_store.hpp"
#include "ugnn/train/optimizer.hpp"

namespace ugnn::train {

/// Everything needed to resume training bitwise or to sample from a trained
/// model: config snapshot, parameters, optimizer moments, epoch counter and
/// the RNG engine state, plus arbitrary named matrices (graph adjacency,
/// normalization stats).
struct Checkpoint {
  std::uint32_t version = 1;
  std::string config_text;
  ad::ParameterStore params;
  AdamWState opt_state;
  int epoch = 0;  // next epoch to run when resuming
  std::string rng_state;
  double best_val = 0.0;
  int best_epoch = -1;
  std::map<std::string, Mat> extra;
};

/// Single file: magic "UGNN", version u32, then (name-length u32, name,
/// ndims u32, dims u64..., payload f64...) records, all little-endian.
/// Parameter arrays are stored row-major under param/<name>; optimizer
/// moments under adam_m/ and adam_v/; text blobs byte-per-double under
/// text/.
void save_checkpoint(const std::string& path, const Checkpoint& ckpt);
Checkpoint load_checkpoint(const std::string& path);

}  // namespace ugnn::train
