#include "ugnn/diffusion/process.hpp"

#include <cmath>

#include "ugnn/common/error.hpp"

namespace ugnn::diffusion {

Objective objective_from_string(const std::string& s) {
  if (s == "eps" || s == "eps_pred") return Objective::eps_pred;
  if (s == "x0" || s == "x0_pred") return Objective::x0_pred;
  throw ArgumentError("unknown objective: " + s);
}

std::string to_string(Objective o) { return o == Objective::eps_pred ? "eps" : "x0"; }

Mat forward_sample(const Mat& x0, int t, const Mat& eps, const NoiseSchedule& schedule) {
  if (t == 0) return x0;
  if (t < 0 || t > schedule.T) throw ArgumentError("forward_sample: t out of [0, T]");
  if (!x0.same_shape(eps)) throw StructuralError("forward_sample: x0/eps shape mismatch");
  const double abar = schedule.alpha_bar_at(t);
  const double a = std::sqrt(abar);
  const double b = std::sqrt(1.0 - abar);
  Mat out(x0.rows, x0.cols);
  for (std::size_t i = 0; i < out.d.size(); ++i) out.d[i] = a * x0.d[i] + b * eps.d[i];
  return out;
}

Mat reverse_step(const Mat& x_t, int t, const Mat& eps_hat, const NoiseSchedule& schedule,
                 const Mat& w) {
  if (t < 1 || t > schedule.T) throw ArgumentError("reverse_step: t out of [1, T]");
  if (!x_t.same_shape(eps_hat) || !x_t.same_shape(w)) {
    throw StructuralError("reverse_step: shape mismatch");
  }
  if (t == 1) {
    for (double v : w.d) {
      if (v != 0.0) throw ArgumentError("reverse_step: w must be zero at t = 1");
    }
  }
  const double beta = schedule.beta_at(t);
  const double inv_sqrt_alpha = 1.0 / std::sqrt(schedule.alpha_at(t));
  const double coef = beta / std::sqrt(1.0 - schedule.alpha_bar_at(t));
  const double sigma = std::sqrt(beta);
  Mat out(x_t.rows, x_t.cols);
  for (std::size_t i = 0; i < out.d.size(); ++i) {
    out.d[i] = inv_sqrt_alpha * (x_t.d[i] - coef * eps_hat.d[i]) + sigma * w.d[i];
  }
  if (!out.all_finite()) throw NumericError("reverse_step: non-finite state");
  return out;
}

LossResult training_loss(const model::UGnn& model, const std::vector<TrainingExample>& batch,
                         const NoiseSchedule& schedule, RngStream& rng, Objective objective) {
  if (batch.empty()) throw ArgumentError("training_loss: empty batch");
  LossResult result;
  result.grads = model.params().zero_grads();
  const double inv_n = 1.0 / static_cast<double>(batch.size());

  for (const auto& ex : batch) {
    if (ex.x0 == nullptr) throw ContractViolation("training_loss: null x0");
    const int t = 1 + static_cast<int>(rng.uniform_int(schedule.T));
    Mat eps(ex.x0->rows, ex.x0->cols);
    rng.fill_normal(eps);
    const Mat x_t = forward_sample(*ex.x0, t, eps, schedule);

    ad::Tape tape;
    auto pid = model.params().bind(tape);
    const int x_id = tape.leaf(x_t);
    const int u_id = ex.u != nullptr ? tape.leaf(*ex.u) : -1;
    const int pred = model.record_forward(tape, pid, x_id, t, u_id);
    const int target = tape.leaf(objective == Objective::eps_pred ? eps : *ex.x0);
    const int loss = tape.mse(pred, target);
    tape.backward(loss);

    result.loss += tape.value(loss).at(0, 0) * inv_n;
    for (auto& [name, g] : result.grads) {
      const Mat gi = tape.grad(pid.at(name));
      for (std::size_t i = 0; i < g.d.size(); ++i) g.d[i] += gi.d[i] * inv_n;
    }
  }
  if (!std::isfinite(result.loss)) throw NumericError("training_loss: non-finite loss");
  return result;
}

double example_loss(const model::UGnn& model, const TrainingExample& ex, int t, const Mat& eps,
                    const NoiseSchedule& schedule, Objective objective) {
  const Mat x_t = forward_sample(*ex.x0, t, eps, schedule);
  const Mat pred = model.predict(x_t, t, ex.u);
  const Mat& target = objective == Objective::eps_pred ? eps : *ex.x0;
  double s = 0.0;
  for (std::size_t i = 0; i < pred.d.size(); ++i) {
    const double diff = pred.d[i] - target.d[i];
    s += diff * diff;
  }
  return s / static_cast<double>(pred.d.size());
}

Mat UGnnPredictor::predict_noise(const Mat& x_t, int t) const {
  const Mat out = model_.predict(x_t, t, u_);
  if (objective_ == Objective::eps_pred) return out;
  // x0 objective: eps_hat = (x_t - sqrt(abar_t) x0_hat) / sqrt(1 - abar_t).
  const double abar = schedule_.alpha_bar_at(t);
  const double a = std::sqrt(abar);
  const double b = std::sqrt(1.0 - abar);
  Mat eps_hat(x_t.rows, x_t.cols);
  for (std::size_t i = 0; i < eps_hat.d.size(); ++i) {
    eps_hat.d[i] = (x_t.d[i] - a * out.d[i]) / b;
  }
  return eps_hat;
}

std::vector<Mat> sample_trajectories(const NoisePredictor& predictor, int n_nodes, int width,
                                     const NoiseSchedule& schedule, int n_traj,
                                     std::uint64_t base_seed) {
  if (n_traj < 1) throw ArgumentError("sample_trajectories: n_traj must be >= 1");
  std::vector<Mat> out;
  out.reserve(n_traj);
  const Mat zero(n_nodes, width);
  for (int traj = 0; traj < n_traj; ++traj) {
    RngStream rng(base_seed, static_cast<std::uint64_t>(traj));
    Mat x = rng.normal_mat(n_nodes, width);
    for (int t = schedule.T; t >= 1; --t) {
      const Mat eps_hat = predictor.predict_noise(x, t);
      if (t > 1) {
        Mat w(n_nodes, width);
        rng.fill_normal(w);
        x = reverse_step(x, t, eps_hat, schedule, w);
      } else {
        x = reverse_step(x, t, eps_hat, schedule, zero);
      }
    }
    out.push_back(std::move(x));
  }
  return out;
}

eval::ForecastEnsemble sample(const model::UGnn& model, const Mat* u,
                              const NoiseSchedule& schedule, int n_traj,
                              std::uint64_t base_seed, Objective objective) {
  UGnnPredictor predictor(model, u, schedule, objective);
  auto trajs = sample_trajectories(predictor, model.config().n_nodes(),
                                   model.config().target_width, schedule, n_traj, base_seed);
  eval::ForecastEnsemble e;
  e.trajs.reserve(trajs.size());
  for (const auto& t : trajs) e.trajs.push_back(transpose(t));
  return e;
}

}  // namespace ugnn::diffusion
