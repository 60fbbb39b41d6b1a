#pragma once

#include <string>
#include <vector>

#include "ugnn/common/mat.hpp"

namespace ugnn::eval {

/// Sampled forecast trajectories for one conditioning window plus the
/// realized target. Trajectories and target are day-major T_h x N matrices of
/// log returns. history (T_p x N) is optional context used for baselines and
/// plotting.
struct ForecastEnsemble {
  std::vector<Mat> trajs;  // n_traj matrices, each T_h x N
  Mat target;              // T_h x N; may be empty before it is attached
  Mat history;             // T_p x N; optional
  int chunk_id = -1;       // window origin
  int day_offset = -1;

  int n_traj() const { return static_cast<int>(trajs.size()); }
  int horizon() const { return trajs.empty() ? 0 : trajs.front().rows; }
  int n_nodes() const { return trajs.empty() ? 0 : trajs.front().cols; }

  void validate() const;
};

/// CSV with header traj_id,day,node_id,value; one row per (trajectory, day,
/// node). Days run 1..T_h. The realized target is stored as traj_id = -1 and
/// the conditioning history as traj_id = -2 with days -T_p+1..0.
void write_ensemble_csv(const std::string& path, const ForecastEnsemble& e);
ForecastEnsemble read_ensemble_csv(const std::string& path);

}  // namespace ugnn::eval
