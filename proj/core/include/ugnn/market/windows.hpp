#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ugnn/common/mat.hpp"
#include "ugnn/market/price_table.hpp"

namespace ugnn::market {

/// Per-node affine normalization fitted on training data only; standardize
/// and destandardize are exact inverses. A floor of 1e-8 is applied to the
/// per-node std so constant series stay finite.
struct Standardizer {
  std::vector<double> mean;
  std::vector<double> std;

  /// Fits per-node stats over the given day indices of a day-major series.
  static Standardizer fit(const Mat& series, const std::vector<int>& day_indices);

  Mat standardize_series(const Mat& series) const;      // days x N
  Mat destandardize_series(const Mat& series) const;
  Mat standardize_window(const Mat& window) const;      // N x T (rows are nodes)
  Mat destandardize_window(const Mat& window) const;
};

/// One training example: conditioning features over the past T_p days stacked
/// along the feature dimension (day-major: column j*U + f) and the future
/// T_h days of log returns. Standardized copies feed the model; raw copies
/// feed the baselines and metrics.
struct WindowPair {
  Mat past;         // N x (T_p * U), standardized
  Mat future;       // N x T_h, standardized
  Mat past_raw;     // N x T_p raw log returns
  Mat future_raw;   // N x T_h raw log returns
  int chunk_id = -1;
  int day_offset = -1;  // first day of the past window within the series
};

struct Chunk {
  int begin = 0;  // [begin, end) day indices
  int end = 0;
  int length() const { return end - begin; }
};

struct ChunkSplit {
  std::vector<Chunk> chunks;
  std::vector<int> train, val, test;  // chunk ids
};

/// Contiguous chunks of chunk_len days (a trailing partial chunk is dropped),
/// shuffled deterministically by seed and split train/val/test by the given
/// ratios: floor(ratio * n) chunks for val and test, remainder to train.
ChunkSplit chunk_split(int n_days, int chunk_len, double val_ratio, double test_ratio,
                       std::uint64_t seed);

/// Sliding windows with the given stride over [begin, end) of the day axis.
/// Returns an empty list (with a warning) when the range is too short.
std::vector<WindowPair> window_dataset(const Mat& returns_std, const Mat& returns_raw,
                                       const std::vector<Mat>& features_std, int t_past,
                                       int t_horizon, int stride, int begin, int end,
                                       int chunk_id);

struct DatasetConfig {
  int t_past = 20;
  int t_horizon = 10;
  int stride = 1;
  int chunk_len = 60;
  double val_ratio = 0.05;
  double test_ratio = 0.05;
  std::vector<std::string> features = {"log_return", "log_volume_z"};
  std::uint64_t split_seed = 1;
};

/// Windowed, standardized train/val/test sets plus the fitted normalizers.
struct WindowDataset {
  std::vector<WindowPair> train, val, test;
  Standardizer return_norm;
  std::vector<Standardizer> feature_norms;  // parallel to config.features
  int t_past = 0, t_horizon = 0, n_nodes = 0, n_features = 0;

  int conditioning_width() const { return t_past * n_features; }
};

/// Full data layer for one price table: log returns, feature series, chunked
/// split, per-node standardization on the training days, windows.
WindowDataset build_dataset(const PriceTable& table, const DatasetConfig& config);

}  // namespace ugnn::market
