#pragma once

#include <vector>

namespace ugnn::diffusion {

/// Noise schedule triples (beta_t, alpha_t, alpha_bar_t) for t = 1..T.
/// Arrays are stored 0-indexed, so the entry for step t lives at index t - 1;
/// alpha_bar(0) = 1 by convention. beta is clipped to [1e-8, 0.999] and
/// alpha_bar is rebuilt from the clipped alphas, so
/// alpha_bar(t) = alpha_bar(t-1) * alpha(t) holds exactly.
struct NoiseSchedule {
  int T = 0;
  std::vector<double> beta;
  std::vector<double> alpha;
  std::vector<double> alpha_bar;

  double beta_at(int t) const;       // t in [1, T]
  double alpha_at(int t) const;      // t in [1, T]
  double alpha_bar_at(int t) const;  // t in [0, T], alpha_bar(0) = 1

  void validate() const;
};

/// Builds a schedule from raw per-step betas (clipped as described above).
NoiseSchedule schedule_from_betas(std::vector<double> betas);

/// Cosine schedule: alpha_bar(t) = f(t)/f(0) with
/// f(t) = cos^2( ((t/T + s)/(1 + s)) * pi/2 ), s = 0.008, and
/// beta_t = 1 - alpha_bar(t)/alpha_bar(t-1).
NoiseSchedule cosine_schedule(int T);

/// beta_t linear from beta_min to beta_max inclusive.
NoiseSchedule linear_schedule(int T, double beta_min, double beta_max);

}  // namespace ugnn::diffusion
