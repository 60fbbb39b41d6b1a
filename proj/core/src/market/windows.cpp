#include "ugnn/market/windows.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>

#include "ugnn/common/error.hpp"
#include "ugnn/common/rng.hpp"

namespace ugnn::market {

namespace {
constexpr double kStdFloor = 1e-8;
}

Standardizer Standardizer::fit(const Mat& series, const std::vector<int>& day_indices) {
  if (day_indices.empty()) throw ArgumentError("Standardizer::fit: no training days");
  Standardizer s;
  const int n = series.cols;
  s.mean.assign(n, 0.0);
  s.std.assign(n, 0.0);
  for (int j = 0; j < n; ++j) {
    double m = 0.0;
    for (int d : day_indices) m += series.at(d, j);
    m /= static_cast<double>(day_indices.size());
    double var = 0.0;
    for (int d : day_indices) {
      const double dev = series.at(d, j) - m;
      var += dev * dev;
    }
    var /= static_cast<double>(day_indices.size());
    s.mean[j] = m;
    s.std[j] = std::max(std::sqrt(var), kStdFloor);
  }
  return s;
}

Mat Standardizer::standardize_series(const Mat& series) const {
  if (series.cols != static_cast<int>(mean.size())) {
    throw StructuralError("Standardizer: column count mismatch");
  }
  Mat out = series;
  for (int d = 0; d < out.rows; ++d)
    for (int j = 0; j < out.cols; ++j) out.at(d, j) = (out.at(d, j) - mean[j]) / std[j];
  return out;
}

Mat Standardizer::destandardize_series(const Mat& series) const {
  if (series.cols != static_cast<int>(mean.size())) {
    throw StructuralError("Standardizer: column count mismatch");
  }
  Mat out = series;
  for (int d = 0; d < out.rows; ++d)
    for (int j = 0; j < out.cols; ++j) out.at(d, j) = out.at(d, j) * std[j] + mean[j];
  return out;
}

Mat Standardizer::standardize_window(const Mat& window) const {
  if (window.rows != static_cast<int>(mean.size())) {
    throw StructuralError("Standardizer: row count mismatch");
  }
  Mat out = window;
  for (int i = 0; i < out.rows; ++i)
    for (int j = 0; j < out.cols; ++j) out.at(i, j) = (out.at(i, j) - mean[i]) / std[i];
  return out;
}

Mat Standardizer::destandardize_window(const Mat& window) const {
  if (window.rows != static_cast<int>(mean.size())) {
    throw StructuralError("Standardizer: row count mismatch");
  }
  Mat out = window;
  for (int i = 0; i < out.rows; ++i)
    for (int j = 0; j < out.cols; ++j) out.at(i, j) = out.at(i, j) * std[i] + mean[i];
  return out;
}

ChunkSplit chunk_split(int n_days, int chunk_len, double val_ratio, double test_ratio,
                       std::uint64_t seed) {
  if (chunk_len < 1) throw ArgumentError("chunk_split: chunk_len must be >= 1");
  if (val_ratio < 0.0 || test_ratio < 0.0 || val_ratio + test_ratio >= 1.0) {
    throw ArgumentError("chunk_split: bad ratios");
  }
  ChunkSplit split;
  for (int begin = 0; begin + chunk_len <= n_days; begin += chunk_len) {
    split.chunks.push_back(Chunk{begin, begin + chunk_len});
  }
  const int n = static_cast<int>(split.chunks.size());
  if (n < 3) throw ArgumentError("chunk_split: need at least 3 chunks");

  std::vector<int> order(n);
  for (int i = 0; i < n; ++i) order[i] = i;
  // Fisher-Yates with an owned stream; std::shuffle is not portable across
  // standard libraries.
  RngStream rng(seed, /*stream=*/0x511);
  for (int i = n - 1; i > 0; --i) {
    const int j = static_cast<int>(rng.uniform_int(static_cast<std::uint64_t>(i) + 1));
    std::swap(order[i], order[j]);
  }

  const int n_val = static_cast<int>(std::floor(val_ratio * n));
  const int n_test = static_cast<int>(std::floor(test_ratio * n));
  const int n_train = n - n_val - n_test;
  split.train.assign(order.begin(), order.begin() + n_train);
  split.val.assign(order.begin() + n_train, order.begin() + n_train + n_val);
  split.test.assign(order.begin() + n_train + n_val, order.end());
  return split;
}

std::vector<WindowPair> window_dataset(const Mat& returns_std, const Mat& returns_raw,
                                       const std::vector<Mat>& features_std, int t_past,
                                       int t_horizon, int stride, int begin, int end,
                                       int chunk_id) {
  if (t_past < 1 || t_horizon < 1) throw ArgumentError("window_dataset: window sizes >= 1");
  if (stride < 1) throw ArgumentError("window_dataset: stride must be >= 1");
  if (begin < 0 || end > returns_std.rows || begin > end) {
    throw ArgumentError("window_dataset: bad day range");
  }
  std::vector<WindowPair> out;
  const int span = t_past + t_horizon;
  if (end - begin < span) {
    std::cerr << "warning: day range of length " << end - begin
              << " too short for windows of " << span << " days\n";
    return out;
  }
  const int n = returns_std.cols;
  const int n_feat = static_cast<int>(features_std.size());
  for (int start = begin; start + span <= end; start += stride) {
    WindowPair w;
    w.chunk_id = chunk_id;
    w.day_offset = start;
    w.past = Mat(n, t_past * n_feat);
    w.past_raw = Mat(n, t_past);
    for (int j = 0; j < t_past; ++j) {
      for (int i = 0; i < n; ++i) {
        for (int f = 0; f < n_feat; ++f) {
          w.past.at(i, j * n_feat + f) = features_std[f].at(start + j, i);
        }
        w.past_raw.at(i, j) = returns_raw.at(start + j, i);
      }
    }
    w.future = Mat(n, t_horizon);
    w.future_raw = Mat(n, t_horizon);
    for (int j = 0; j < t_horizon; ++j) {
      for (int i = 0; i < n; ++i) {
        w.future.at(i, j) = returns_std.at(start + t_past + j, i);
        w.future_raw.at(i, j) = returns_raw.at(start + t_past + j, i);
      }
    }
    out.push_back(std::move(w));
  }
  return out;
}

WindowDataset build_dataset(const PriceTable& table, const DatasetConfig& config) {
  if (config.chunk_len < config.t_past + config.t_horizon) {
    throw ArgumentError("build_dataset: chunk_len must cover t_past + t_horizon");
  }
  if (config.features.empty()) throw ArgumentError("build_dataset: need at least one feature");

  const Mat returns_raw = log_returns(table);
  const auto split =
      chunk_split(returns_raw.rows, config.chunk_len, config.val_ratio, config.test_ratio,
                  config.split_seed);

  std::vector<int> train_days;
  for (int cid : split.train) {
    for (int d = split.chunks[cid].begin; d < split.chunks[cid].end; ++d) train_days.push_back(d);
  }

  WindowDataset ds;
  ds.t_past = config.t_past;
  ds.t_horizon = config.t_horizon;
  ds.n_nodes = returns_raw.cols;
  ds.n_features = static_cast<int>(config.features.size());
  ds.return_norm = Standardizer::fit(returns_raw, train_days);
  const Mat returns_std = ds.return_norm.standardize_series(returns_raw);

  std::vector<Mat> features_std;
  for (const auto& name : config.features) {
    Mat series;
    if (name == "log_return") {
      series = returns_raw;
    } else if (name == "log_volume_z") {
      const Mat* vol = table.extra("volume");
      if (vol == nullptr) throw DataError("feature log_volume_z needs a volume column");
      series = Mat(returns_raw.rows, returns_raw.cols);
      for (int d = 0; d < series.rows; ++d) {
        for (int j = 0; j < series.cols; ++j) {
          const double v = vol->at(d + 1, j);  // aligned with the return day
          if (!(v > 0.0)) throw DataError("log_volume_z: non-positive volume");
          series.at(d, j) = std::log(v);
        }
      }
    } else {
      throw ArgumentError("unknown feature: " + name);
    }
    Standardizer norm = Standardizer::fit(series, train_days);
    features_std.push_back(norm.standardize_series(series));
    ds.feature_norms.push_back(std::move(norm));
  }

  auto emit = [&](const std::vector<int>& chunk_ids, std::vector<WindowPair>& dst) {
    for (int cid : chunk_ids) {
      auto ws = window_dataset(returns_std, returns_raw, features_std, config.t_past,
                               config.t_horizon, config.stride, split.chunks[cid].begin,
                               split.chunks[cid].end, cid);
      for (auto& w : ws) dst.push_back(std::move(w));
    }
  };
  emit(split.train, ds.train);
  emit(split.val, ds.val);
  emit(split.test, ds.test);
  return ds;
}

}  // namespace ugnn::market
