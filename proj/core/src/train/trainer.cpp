#include "ugnn/train/trainer.hpp"

#include <cmath>
#include <limits>

#include "ugnn/common/error.hpp"

namespace ugnn::train {

void TrainConfig::validate() const {
  if (batch_size < 1) throw ArgumentError("TrainConfig: batch_size must be >= 1");
  if (max_epochs < 1) throw ArgumentError("TrainConfig: max_epochs must be >= 1");
  if (!(lr_init > lr_min) || lr_min < 0.0) {
    throw ArgumentError("TrainConfig: need lr_init > lr_min >= 0");
  }
  if (lr_period0 < 1) throw ArgumentError("TrainConfig: lr_period0 must be >= 1");
  if (lr_period_mult < 1.0) throw ArgumentError("TrainConfig: lr_period_mult must be >= 1");
  if (patience < 0) throw ArgumentError("TrainConfig: patience must be >= 0");
}

TrainOutcome train(model::UGnn& model, const std::vector<diffusion::TrainingExample>& train_set,
                   const std::vector<diffusion::TrainingExample>& val_set,
                   const diffusion::NoiseSchedule& schedule, const TrainConfig& config,
                   const ProgressFn& progress, const TrainState* resume) {
  config.validate();
  if (train_set.empty() || val_set.empty()) {
    throw ArgumentError("train: train and validation sets must be nonempty");
  }

  RngStream rng(config.seed, /*stream=*/0x7121);
  AdamWState opt_state = AdamWState::init(model.params());
  int start_epoch = 0;
  double best_val = std::numeric_limits<double>::infinity();
  int best_epoch = -1;
  if (resume != nullptr) {
    rng.restore(resume->rng_state);
    opt_state = resume->opt_state;
    start_epoch = resume->next_epoch;
    best_val = resume->best_val;
    best_epoch = resume->best_epoch;
  }

  // Fixed validation noise: one (t, eps) pair per validation window, derived
  // from the seed so scores are comparable across epochs and resumes.
  std::vector<std::pair<int, Mat>> val_noise;
  {
    RngStream vrng(config.seed, /*stream=*/0x7a11);
    val_noise.reserve(val_set.size());
    for (const auto& ex : val_set) {
      const int t = 1 + static_cast<int>(vrng.uniform_int(schedule.T));
      val_noise.emplace_back(t, vrng.normal_mat(ex.x0->rows, ex.x0->cols));
    }
  }
  auto validation_loss = [&]() {
    double s = 0.0;
    for (std::size_t i = 0; i < val_set.size(); ++i) {
      s += diffusion::example_loss(model, val_set[i], val_noise[i].first, val_noise[i].second,
                                   schedule, config.objective);
    }
    return s / static_cast<double>(val_set.size());
  };

  TrainOutcome out;
  out.best_params = model.params();
  out.best_val = best_val;
  out.best_epoch = best_epoch;
  const WarmRestartSchedule lr_sched = config.lr_schedule();

  std::vector<int> order(train_set.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);

  int epoch = start_epoch;
  for (; epoch < config.max_epochs; ++epoch) {
    const double lr = lr_at(epoch, lr_sched);
    // Seeded Fisher-Yates shuffle of the window order.
    for (int i = static_cast<int>(order.size()) - 1; i > 0; --i) {
      const int j = static_cast<int>(rng.uniform_int(static_cast<std::uint64_t>(i) + 1));
      std::swap(order[i], order[j]);
    }

    double train_loss = 0.0;
    int n_batches = 0;
    for (std::size_t pos = 0; pos < order.size(); pos += config.batch_size) {
      std::vector<diffusion::TrainingExample> batch;
      batch.reserve(config.batch_size);
      for (std::size_t i = pos; i < order.size() && batch.size() < static_cast<std::size_t>(config.batch_size); ++i) {
        batch.push_back(train_set[order[i]]);
      }
      auto res = diffusion::training_loss(model, batch, schedule, rng, config.objective);
      if (!std::isfinite(res.loss) || res.loss > 1e6) {
        throw NumericError("train: divergence at epoch " + std::to_string(epoch) + ", loss " +
                           std::to_string(res.loss));
      }
      adamw_step(model.params(), res.grads, opt_state, lr, config.opt);
      train_loss += res.loss;
      ++n_batches;
    }
    train_loss /= std::max(1, n_batches);

    const double val_loss = validation_loss();
    out.val_history.push_back(val_loss);
    const bool improved = val_loss < best_val;
    if (improved) {
      best_val = val_loss;
      best_epoch = epoch;
      out.best_params = model.params();
    }
    if (progress) progress(EpochReport{epoch, train_loss, val_loss, lr, improved});
    if (!improved && epoch - best_epoch > config.patience) {
      ++epoch;
      out.stopped_early = true;
      break;
    }
  }

  out.best_val = best_val;
  out.best_epoch = best_epoch;
  out.epochs_run = epoch - start_epoch;
  out.final_state.next_epoch = epoch;
  out.final_state.opt_state = std::move(opt_state);
  out.final_state.rng_state = rng.state();
  out.final_state.best_val = best_val;
  out.final_state.best_epoch = best_epoch;
  return out;
}

}  // namespace ugnn::train
