#pragma once

#include <string>
#include <vector>

#include "ugnn/common/mat.hpp"
#include "ugnn/eval/ensemble.hpp"

namespace ugnn::eval {

/// Whether metrics see daily log returns or their running sums over the
/// horizon (the convention used for trajectory plots).
enum class ReturnConvention { per_day, cumulative };

/// Running sum down the day dimension (rows).
Mat cumulative_days(const Mat& m);

/// Empirical-CDF CRPS with the all-pairs estimator
///   mean_i |x_i - y| - 1/2 mean_{i,j} |x_i - x_j|   (all n^2 pairs).
/// A collapsed sample set short-circuits to |x - y| so the identity
/// CRPS = absolute error is exact.
double crps_ensemble(const std::vector<double>& samples, double y);

/// Interval score (u - l) + (2/alpha) [(l - y)+ + (y - u)+].
double interval_score(double lower, double upper, double y, double alpha);

/// Inclusive linear-interpolation quantile of unsorted samples, p in [0, 1].
double quantile(std::vector<double> samples, double p);

/// Mean interval score at the empirical alpha/2 and 1-alpha/2 quantiles.
double mis_ensemble(const std::vector<double>& samples, double y, double alpha = 0.05);

/// Ensemble metrics averaged over all (day, node) cells. RMSE and MAE score
/// the ensemble-mean trajectory against the target; CRPS and MIS score the
/// per-cell sample distribution.
double rmse(const ForecastEnsemble& e, ReturnConvention conv = ReturnConvention::cumulative);
double mae(const ForecastEnsemble& e, ReturnConvention conv = ReturnConvention::cumulative);
double crps(const ForecastEnsemble& e, ReturnConvention conv = ReturnConvention::cumulative);
double mis(const ForecastEnsemble& e, double alpha = 0.05,
           ReturnConvention conv = ReturnConvention::cumulative);

struct MetricRow {
  std::string model;
  int t_past = 0;
  int t_horizon = 0;
  std::string metric;
  double value = 0.0;
};

/// CSV with header model,T_p,T_h,metric,value.
void write_metrics_csv(const std::string& path, const std::vector<MetricRow>& rows);
std::vector<MetricRow> read_metrics_csv(const std::string& path);

}  // namespace ugnn::eval
