#include "ugnn/train/lr_schedule.hpp"

#include <cmath>
#include <numbers>

#include "ugnn/common/error.hpp"

namespace ugnn::train {

double lr_at(int epoch, const WarmRestartSchedule& schedule) {
  if (epoch < 0) throw ArgumentError("lr_at: epoch must be >= 0");
  if (schedule.period0 < 1) throw ArgumentError("lr_at: period0 must be >= 1");
  if (schedule.period_mult < 1.0) throw ArgumentError("lr_at: period_mult must be >= 1");
  if (!(schedule.lr_init > schedule.lr_min) || schedule.lr_min < 0.0) {
    throw ArgumentError("lr_at: need lr_init > lr_min >= 0");
  }
  long long remaining = epoch;
  long long period = schedule.period0;
  while (remaining >= period) {
    remaining -= period;
    period = std::max<long long>(1, std::llround(period * schedule.period_mult));
  }
  const double tau = static_cast<double>(remaining) / static_cast<double>(period);
  return schedule.lr_min +
         (schedule.lr_init - schedule.lr_min) * (1.0 + std::cos(std::numbers::pi * tau)) / 2.0;
}

}  // namespace ugnn::train
