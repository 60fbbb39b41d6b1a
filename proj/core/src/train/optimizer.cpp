#include "ugnn/train/optimizer.hpp"

#include <cmath>

#include "ugnn/common/error.hpp"

namespace ugnn::train {

AdamWState AdamWState::init(const ad::ParameterStore& params) {
  AdamWState s;
  s.m = params.zero_grads();
  s.v = params.zero_grads();
  return s;
}

void adamw_step(ad::ParameterStore& params, const ad::GradMap& grads, AdamWState& state,
                double lr, const AdamWConfig& config) {
  for (const auto& [name, g] : grads) {
    if (!g.all_finite()) {
      throw NumericError("adamw_step: non-finite gradient for " + name + ", step aborted");
    }
  }
  ++state.step;
  const double bc1 = 1.0 - std::pow(config.beta1, state.step);
  const double bc2 = 1.0 - std::pow(config.beta2, state.step);
  for (auto& [name, tensor] : params) {
    Mat& w = params.at(name);
    const Mat& g = grads.at(name);
    Mat& m = state.m.at(name);
    Mat& v = state.v.at(name);
    for (std::size_t i = 0; i < w.d.size(); ++i) {
      w.d[i] -= lr * config.weight_decay * w.d[i];
      m.d[i] = config.beta1 * m.d[i] + (1.0 - config.beta1) * g.d[i];
      v.d[i] = config.beta2 * v.d[i] + (1.0 - config.beta2) * g.d[i] * g.d[i];
      const double m_hat = m.d[i] / bc1;
      const double v_hat = v.d[i] / bc2;
      w.d[i] -= lr * m_hat / (std::sqrt(v_hat) + config.eps);
    }
  }
}

}  // namespace ugnn::train
