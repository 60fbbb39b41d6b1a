#pragma once

namespace ugnn::train {

/// Cosine learning-rate schedule with warm restarts. Period i has length
/// period0 * period_mult^i epochs; within a period the rate decays from
/// lr_init to lr_min along a half cosine and resets at the next restart.
struct WarmRestartSchedule {
  double lr_init = 2e-2;
  double lr_min = 1e-5;
  int period0 = 1000;
  double period_mult = 2.0;
};

double lr_at(int epoch, const WarmRestartSchedule& schedule);

}  // namespace ugnn::train
