#pragma once

#include "ugnn/ad/param_store.hpp"

namespace ugnn::train {

struct AdamWConfig {
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
  double weight_decay = 1e-4;
};

/// First and second moment estimates plus the step counter.
struct AdamWState {
  int step = 0;
  ad::GradMap m;
  ad::GradMap v;

  static AdamWState init(const ad::ParameterStore& params);
};

/// One decoupled-weight-decay adaptive step: parameters first shrink by
/// lr * weight_decay, then move by the bias-corrected moment ratio.
/// A non-finite gradient aborts the step before any state is touched.
void adamw_step(ad::ParameterStore& params, const ad::GradMap& grads, AdamWState& state,
                double lr, const AdamWConfig& config);

}  // namespace ugnn::train
