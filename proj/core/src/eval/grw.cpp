#include "ugnn/eval/grw.hpp"

#include <cmath>

#include "ugnn/common/error.hpp"

namespace ugnn::eval {

GRWParams fit_grw(const std::vector<double>& past) {
  const int n = static_cast<int>(past.size());
  if (n < 2) throw ArgumentError("fit_grw: need at least two past returns");
  double mean = 0.0;
  for (double r : past) mean += r;
  mean /= n;
  double ss = 0.0;
  for (double r : past) {
    const double dev = r - mean;
    ss += dev * dev;
  }
  GRWParams p;
  p.drift = mean;
  p.vol = std::sqrt(ss / (n - 1));
  if (!std::isfinite(p.drift) || !std::isfinite(p.vol)) {
    throw NumericError("fit_grw: non-finite estimates");
  }
  return p;
}

std::vector<std::vector<double>> simulate_grw(const GRWParams& params, int horizon, int n_traj,
                                              std::uint64_t base_seed) {
  if (horizon < 1) throw ArgumentError("simulate_grw: horizon must be >= 1");
  if (n_traj < 1) throw ArgumentError("simulate_grw: n_traj must be >= 1");
  std::vector<std::vector<double>> trajs(n_traj);
  for (int i = 0; i < n_traj; ++i) {
    RngStream rng(base_seed, static_cast<std::uint64_t>(i));
    trajs[i].resize(horizon);
    for (int d = 0; d < horizon; ++d) {
      trajs[i][d] = params.drift + params.vol * rng.normal();
    }
  }
  return trajs;
}

}  // namespace ugnn::eval
