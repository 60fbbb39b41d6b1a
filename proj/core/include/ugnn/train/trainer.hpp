#pragma once

#include <functional>
#include <vector>

#include "ugnn/diffusion/process.hpp"
#include "ugnn/diffusion/schedule.hpp"
#include "ugnn/model/ugnn.hpp"
#include "ugnn/train/lr_schedule.hpp"
#include "ugnn/train/optimizer.hpp"

namespace ugnn::train {

struct TrainConfig {
  int batch_size = 64;
  int max_epochs = 50000;
  double lr_init = 2e-2;
  AdamWConfig opt;
  double lr_min = 1e-5;
  int lr_period0 = 1000;
  double lr_period_mult = 2.0;
  int patience = 500;
  std::uint64_t seed = 1;
  diffusion::Objective objective = diffusion::Objective::eps_pred;

  void validate() const;
  WarmRestartSchedule lr_schedule() const {
    return WarmRestartSchedule{lr_init, lr_min, lr_period0, lr_period_mult};
  }
};

/// Resumable trainer state; saving this after epoch e and resuming produces
/// the same parameter trajectory bitwise as an uninterrupted run.
struct TrainState {
  int next_epoch = 0;
  AdamWState opt_state;
  std::string rng_state;
  double best_val = 0.0;
  int best_epoch = -1;
};

struct EpochReport {
  int epoch = 0;
  double train_loss = 0.0;
  double val_loss = 0.0;
  double lr = 0.0;
  bool improved = false;
};

using ProgressFn = std::function<void(const EpochReport&)>;

struct TrainOutcome {
  ad::ParameterStore best_params;
  double best_val = 0.0;
  int best_epoch = -1;
  int epochs_run = 0;
  bool stopped_early = false;
  std::vector<double> val_history;
  TrainState final_state;
};

/// Epoch loop: seeded shuffle of the training windows, mini-batch gradient
/// accumulation, decoupled-weight-decay adaptive steps under the warm-restart
/// cosine rate, validation scored each epoch on a fixed noise set (drawn once
/// from the seed), early stopping on the best validation loss. Keeps the
/// best-validation parameters. Training diverging (loss above 1e6 or
/// non-finite) raises a numeric error naming the epoch.
TrainOutcome train(model::UGnn& model, const std::vector<diffusion::TrainingExample>& train_set,
                   const std::vector<diffusion::TrainingExample>& val_set,
                   const diffusion::NoiseSchedule& schedule, const TrainConfig& config,
                   const ProgressFn& progress = {}, const TrainState* resume = nullptr);

}  // namespace ugnn::train
