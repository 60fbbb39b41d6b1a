#pragma once

#include <cstdint>
#include <vector>

#include "ugnn/common/mat.hpp"
#include "ugnn/common/rng.hpp"

namespace ugnn::eval {

/// Geometric-random-walk coefficients for one stock, estimated from its past
/// window of daily log returns.
struct GRWParams {
  double drift = 0.0;  // sample mean
  double vol = 0.0;    // sample std, divisor T_p - 1
};

/// Fits drift and volatility from at least two past log returns.
GRWParams fit_grw(const std::vector<double>& past);

/// n_traj trajectories of T_h i.i.d. N(drift, vol^2) daily log returns; each
/// trajectory draws from its own stream of base_seed.
std::vector<std::vector<double>> simulate_grw(const GRWParams& params, int horizon, int n_traj,
                                              std::uint64_t base_seed);

}  // namespace ugnn::eval
