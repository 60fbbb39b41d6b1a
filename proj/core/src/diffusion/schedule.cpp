#include "ugnn/diffusion/schedule.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "ugnn/common/error.hpp"

namespace ugnn::diffusion {

double NoiseSchedule::beta_at(int t) const {
  if (t < 1 || t > T) throw ArgumentError("NoiseSchedule: t out of [1, T]");
  return beta[t - 1];
}

double NoiseSchedule::alpha_at(int t) const {
  if (t < 1 || t > T) throw ArgumentError("NoiseSchedule: t out of [1, T]");
  return alpha[t - 1];
}

double NoiseSchedule::alpha_bar_at(int t) const {
  if (t == 0) return 1.0;
  if (t < 0 || t > T) throw ArgumentError("NoiseSchedule: t out of [0, T]");
  return alpha_bar[t - 1];
}

void NoiseSchedule::validate() const {
  if (T < 1 || static_cast<int>(beta.size()) != T || static_cast<int>(alpha.size()) != T ||
      static_cast<int>(alpha_bar.size()) != T) {
    throw StructuralError("NoiseSchedule: inconsistent array lengths");
  }
  double prev = 1.0;
  for (int t = 1; t <= T; ++t) {
    if (!(beta[t - 1] >= 1e-8 && beta[t - 1] <= 0.999)) {
      throw StructuralError("NoiseSchedule: beta outside [1e-8, 0.999]");
    }
    if (!(alpha_bar[t - 1] < prev)) {
      throw StructuralError("NoiseSchedule: alpha_bar not strictly decreasing");
    }
    prev = alpha_bar[t - 1];
  }
}

NoiseSchedule schedule_from_betas(std::vector<double> betas) {
  if (betas.empty()) throw ArgumentError("schedule_from_betas: empty schedule");
  NoiseSchedule s;
  s.T = static_cast<int>(betas.size());
  s.beta = std::move(betas);
  s.alpha.resize(s.T);
  s.alpha_bar.resize(s.T);
  double prod = 1.0;
  for (int i = 0; i < s.T; ++i) {
    s.beta[i] = std::clamp(s.beta[i], 1e-8, 0.999);
    s.alpha[i] = 1.0 - s.beta[i];
    prod *= s.alpha[i];
    s.alpha_bar[i] = prod;
  }
  return s;
}

NoiseSchedule cosine_schedule(int T) {
  if (T < 2) throw ArgumentError("cosine_schedule: T must be >= 2");
  constexpr double s = 0.008;
  auto f = [&](double t) {
    const double x = ((t / T + s) / (1.0 + s)) * std::numbers::pi / 2.0;
    const double c = std::cos(x);
    return c * c;
  };
  const double f0 = f(0.0);
  std::vector<double> betas(T);
  double abar_prev = 1.0;
  for (int t = 1; t <= T; ++t) {
    const double abar = f(static_cast<double>(t)) / f0;
    betas[t - 1] = 1.0 - abar / abar_prev;
    abar_prev = abar;
  }
  return schedule_from_betas(std::move(betas));
}

NoiseSchedule linear_schedule(int T, double beta_min, double beta_max) {
  if (T < 1) throw ArgumentError("linear_schedule: T must be >= 1");
  if (!(beta_min > 0.0 && beta_min <= beta_max && beta_max < 1.0)) {
    throw ArgumentError("linear_schedule: need 0 < beta_min <= beta_max < 1");
  }
  std::vector<double> betas(T);
  for (int t = 0; t < T; ++t) {
    const double frac = T == 1 ? 0.0 : static_cast<double>(t) / (T - 1);
    betas[t] = beta_min + (beta_max - beta_min) * frac;
  }
  return schedule_from_betas(std::move(betas));
}

}  // namespace ugnn::diffusion
