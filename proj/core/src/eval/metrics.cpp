#include "ugnn/eval/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "ugnn/common/csv.hpp"
#include "ugnn/common/error.hpp"

namespace ugnn::eval {

Mat cumulative_days(const Mat& m) {
  Mat out = m;
  for (int i = 1; i < out.rows; ++i)
    for (int j = 0; j < out.cols; ++j) out.at(i, j) += out.at(i - 1, j);
  return out;
}

namespace {

bool all_equal(const std::vector<double>& v) {
  for (double x : v) {
    if (x != v.front()) return false;
  }
  return true;
}

/// Per-cell ensemble mean; collapses exactly when all samples are equal.
double cell_mean(const std::vector<double>& v) {
  if (all_equal(v)) return v.front();
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

Mat transform(const Mat& m, ReturnConvention conv) {
  return conv == ReturnConvention::cumulative ? cumulative_days(m) : m;
}

/// Gathers the transformed per-cell samples and target, then averages the
/// cell metric over every (day, node) cell.
template <typename CellMetric>
double over_cells(const ForecastEnsemble& e, ReturnConvention conv, CellMetric&& metric) {
  e.validate();
  if (e.target.d.empty()) throw ArgumentError("ensemble metric: target missing");
  std::vector<Mat> trajs;
  trajs.reserve(e.trajs.size());
  for (const auto& t : e.trajs) trajs.push_back(transform(t, conv));
  const Mat target = transform(e.target, conv);

  double acc = 0.0;
  std::vector<double> cell(e.trajs.size());
  for (int day = 0; day < target.rows; ++day) {
    for (int node = 0; node < target.cols; ++node) {
      for (std::size_t i = 0; i < trajs.size(); ++i) cell[i] = trajs[i].at(day, node);
      acc += metric(cell, target.at(day, node));
    }
  }
  return acc / static_cast<double>(target.size());
}

}  // namespace

double crps_ensemble(const std::vector<double>& samples, double y) {
  const int n = static_cast<int>(samples.size());
  if (n < 1) throw ArgumentError("crps_ensemble: empty sample set");
  if (all_equal(samples)) return std::fabs(samples.front() - y);
  double term1 = 0.0;
  for (double x : samples) term1 += std::fabs(x - y);
  term1 /= n;
  // 1/2 mean_{i,j} |x_i - x_j| over all n^2 pairs, via the sorted identity
  // sum_{i<j} (x_(j) - x_(i)) = sum_k (2k - n + 1) x_(k).
  std::vector<double> sorted = samples;
  std::sort(sorted.begin(), sorted.end());
  double spread = 0.0;
  for (int k = 0; k < n; ++k) spread += (2.0 * k - n + 1.0) * sorted[k];
  return term1 - spread / (static_cast<double>(n) * n);
}

double interval_score(double lower, double upper, double y, double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw ArgumentError("interval_score: alpha out of (0,1)");
  double score = upper - lower;
  if (y < lower) score += (2.0 / alpha) * (lower - y);
  if (y > upper) score += (2.0 / alpha) * (y - upper);
  return score;
}

double quantile(std::vector<double> samples, double p) {
  if (samples.empty()) throw ArgumentError("quantile: empty sample set");
  if (!(p >= 0.0 && p <= 1.0)) throw ArgumentError("quantile: p out of [0, 1]");
  std::sort(samples.begin(), samples.end());
  const int n = static_cast<int>(samples.size());
  const double h = p * (n - 1);
  const int lo = static_cast<int>(std::floor(h));
  if (lo >= n - 1) return samples[n - 1];
  const double frac = h - lo;
  return samples[lo] + frac * (samples[lo + 1] - samples[lo]);
}

double mis_ensemble(const std::vector<double>& samples, double y, double alpha) {
  if (samples.size() < 2) throw ArgumentError("mis_ensemble: need at least two samples");
  const double lower = quantile(samples, alpha / 2.0);
  const double upper = quantile(samples, 1.0 - alpha / 2.0);
  return interval_score(lower, upper, y, alpha);
}

double rmse(const ForecastEnsemble& e, ReturnConvention conv) {
  const double mse = over_cells(e, conv, [](const std::vector<double>& cell, double y) {
    const double diff = cell_mean(cell) - y;
    return diff * diff;
  });
  return std::sqrt(mse);
}

double mae(const ForecastEnsemble& e, ReturnConvention conv) {
  return over_cells(e, conv, [](const std::vector<double>& cell, double y) {
    return std::fabs(cell_mean(cell) - y);
  });
}

double crps(const ForecastEnsemble& e, ReturnConvention conv) {
  return over_cells(e, conv, [](const std::vector<double>& cell, double y) {
    return crps_ensemble(cell, y);
  });
}

double mis(const ForecastEnsemble& e, double alpha, ReturnConvention conv) {
  return over_cells(e, conv, [alpha](const std::vector<double>& cell, double y) {
    return mis_ensemble(cell, y, alpha);
  });
}

void write_metrics_csv(const std::string& path, const std::vector<MetricRow>& rows) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write metrics CSV: " + path);
  out << "model,T_p,T_h,metric,value\n";
  for (const auto& r : rows) {
    out << r.model << ',' << r.t_past << ',' << r.t_horizon << ',' << r.metric << ','
        << format_double(r.value) << '\n';
  }
}

std::vector<MetricRow> read_metrics_csv(const std::string& path) {
  auto lines = csv::read_lines(path);
  std::vector<MetricRow> rows;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    auto f = csv::split_line(lines[i]);
    if (i == 0 && !f.empty() && f[0] == "model") continue;
    if (f.size() != 5) throw DataError("metrics CSV row needs 5 fields: " + path);
    const std::string ctx = path + ":" + std::to_string(i + 1);
    MetricRow r;
    r.model = f[0];
    r.t_past = static_cast<int>(csv::parse_double(f[1], ctx));
    r.t_horizon = static_cast<int>(csv::parse_double(f[2], ctx));
    r.metric = f[3];
    r.value = csv::parse_double(f[4], ctx);
    rows.push_back(std::move(r));
  }
  return rows;
}

}  // namespace ugnn::eval
