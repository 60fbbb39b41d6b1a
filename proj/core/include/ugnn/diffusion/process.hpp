#pragma once

#include <cstdint>
#include <vector>

#include "ugnn/common/mat.hpp"
#include "ugnn/common/rng.hpp"
#include "ugnn/diffusion/schedule.hpp"
#include "ugnn/eval/ensemble.hpp"
#include "ugnn/model/ugnn.hpp"

namespace ugnn::diffusion {

/// Training target: predict the added noise (eps_pred) or the clean signal
/// (x0_pred).
enum class Objective { eps_pred, x0_pred };

Objective objective_from_string(const std::string& s);
std::string to_string(Objective o);

/// x_t = sqrt(abar_t) x0 + sqrt(1 - abar_t) eps. t = 0 returns x0.
Mat forward_sample(const Mat& x0, int t, const Mat& eps, const NoiseSchedule& schedule);

/// One ancestral sampling step
///   x_{t-1} = (x_t - beta_t/sqrt(1-abar_t) eps_hat)/sqrt(alpha_t)
///             + sqrt(beta_t) w.
/// At t = 1 the noise w must be zero (posterior mean step).
Mat reverse_step(const Mat& x_t, int t, const Mat& eps_hat, const NoiseSchedule& schedule,
                 const Mat& w);

/// One (x0, u) pair; u is null for unconditional models.
struct TrainingExample {
  const Mat* x0 = nullptr;
  const Mat* u = nullptr;
};

struct LossResult {
  double loss = 0.0;
  ad::GradMap grads;
};

/// Denoising objective over a mini-batch: per element draw t uniform in
/// [1, T] and eps ~ N(0, I), corrupt x0, run the model, and take the MSE
/// against the objective target. Loss and gradients are averaged over the
/// batch in a fixed order, so results are deterministic for a given rng
/// state.
LossResult training_loss(const model::UGnn& model, const std::vector<TrainingExample>& batch,
                         const NoiseSchedule& schedule, RngStream& rng, Objective objective);

/// Loss of a single example at fixed (t, eps); no gradients. Used for
/// deterministic validation scoring.
double example_loss(const model::UGnn& model, const TrainingExample& ex, int t, const Mat& eps,
                    const NoiseSchedule& schedule, Objective objective);

/// Anything that predicts the noise component of x_t.
class NoisePredictor {
 public:
  virtual ~NoisePredictor() = default;
  virtual Mat predict_noise(const Mat& x_t, int t) const = 0;
};

/// Adapts a trained U-GNN (with an optional conditioning window) to the
/// NoisePredictor interface, converting x0 predictions to noise predictions
/// when the model was trained with the x0 objective.
class UGnnPredictor : public NoisePredictor {
 public:
  UGnnPredictor(const model::UGnn& model, const Mat* u, const NoiseSchedule& schedule,
                Objective objective)
      : model_(model), u_(u), schedule_(schedule), objective_(objective) {}
  Mat predict_noise(const Mat& x_t, int t) const override;

 private:
  const model::UGnn& model_;
  const Mat* u_;
  const NoiseSchedule& schedule_;
  Objective objective_;
};

/// Runs the reverse chain from x_T ~ N(0, I) for t = T..1. Each trajectory
/// uses its own RNG stream (stream index = trajectory index) derived from
/// base_seed, so the ensemble is reproducible and order-independent.
/// Returns one N x F matrix per trajectory.
std::vector<Mat> sample_trajectories(const NoisePredictor& predictor, int n_nodes, int width,
                                     const NoiseSchedule& schedule, int n_traj,
                                     std::uint64_t base_seed);

/// Convenience wrapper producing a day-major ForecastEnsemble (each N x F
/// trajectory transposed to T_h x N). The target stays empty; callers attach
/// the realized path.
eval::ForecastEnsemble sample(const model::UGnn& model, const Mat* u,
                              const NoiseSchedule& schedule, int n_traj,
                              std::uint64_t base_seed,
                              Objective objective = Objective::eps_pred);

}  // namespace ugnn::diffusion
