#include "ugnn/eval/ensemble.hpp"

#include <fstream>
#include <map>

#include "ugnn/common/csv.hpp"
#include "ugnn/common/error.hpp"

namespace ugnn::eval {

void ForecastEnsemble::validate() const {
  if (trajs.empty()) throw ArgumentError("ForecastEnsemble: needs at least one trajectory");
  for (const auto& t : trajs) {
    if (!t.same_shape(trajs.front())) {
      throw StructuralError("ForecastEnsemble: trajectory shapes differ");
    }
    if (!t.all_finite()) throw NumericError("ForecastEnsemble: non-finite trajectory");
  }
  if (!target.d.empty() && !target.same_shape(trajs.front())) {
    throw StructuralError("ForecastEnsemble: target shape differs from trajectories");
  }
}

void write_ensemble_csv(const std::string& path, const ForecastEnsemble& e) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write ensemble CSV: " + path);
  out << "traj_id,day,node_id,value\n";
  auto emit = [&](int traj_id, int day, const Mat& m, int row) {
    for (int node = 0; node < m.cols; ++node) {
      out << traj_id << ',' << day << ',' << node << ','
          << format_double(m.at(row, node)) << '\n';
    }
  };
  for (int i = 0; i < e.n_traj(); ++i) {
    for (int day = 0; day < e.trajs[i].rows; ++day) emit(i, day + 1, e.trajs[i], day);
  }
  if (!e.target.d.empty()) {
    for (int day = 0; day < e.target.rows; ++day) emit(-1, day + 1, e.target, day);
  }
  if (!e.history.d.empty()) {
    const int tp = e.history.rows;
    for (int day = 0; day < tp; ++day) emit(-2, day - tp + 1, e.history, day);
  }
}

ForecastEnsemble read_ensemble_csv(const std::string& path) {
  auto lines = csv::read_lines(path);
  if (lines.empty()) throw DataError("empty ensemble CSV: " + path);
  struct Cell {
    int traj, day, node;
    double value;
  };
  std::vector<Cell> cells;
  cells.reserve(lines.size());
  int max_traj = -1, max_day = 0, min_day = 1, max_node = -1;
  bool has_target = false, has_history = false;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    auto f = csv::split_line(lines[i]);
    if (i == 0 && !csv::looks_numeric(f[0])) continue;  // header
    if (f.size() != 4) throw DataError("ensemble CSV row needs 4 fields: " + path);
    const std::string ctx = path + ":" + std::to_string(i + 1);
    Cell c;
    c.traj = static_cast<int>(csv::parse_double(f[0], ctx));
    c.day = static_cast<int>(csv::parse_double(f[1], ctx));
    c.node = static_cast<int>(csv::parse_double(f[2], ctx));
    c.value = csv::parse_double(f[3], ctx);
    if (c.traj == -1) has_target = true;
    if (c.traj == -2) has_history = true;
    max_traj = std::max(max_traj, c.traj);
    max_node = std::max(max_node, c.node);
    if (c.traj >= -1) max_day = std::max(max_day, c.day);
    if (c.traj == -2) min_day = std::min(min_day, c.day);
    cells.push_back(c);
  }
  if (max_traj < 0 || max_day < 1 || max_node < 0) {
    throw DataError("ensemble CSV has no trajectory rows: " + path);
  }
  ForecastEnsemble e;
  const int n = max_node + 1;
  e.trajs.assign(max_traj + 1, Mat(max_day, n));
  if (has_target) e.target = Mat(max_day, n);
  if (has_history) e.history = Mat(1 - min_day, n);
  for (const auto& c : cells) {
    if (c.traj >= 0) {
      if (c.day < 1 || c.day > max_day) throw DataError("ensemble CSV day out of range: " + path);
      e.trajs[c.traj].at(c.day - 1, c.node) = c.value;
    } else if (c.traj == -1) {
      e.target.at(c.day - 1, c.node) = c.value;
    } else if (c.traj == -2) {
      e.history.at(c.day - min_day, c.node) = c.value;
    } else {
      throw DataError("ensemble CSV has unknown traj_id: " + path);
    }
  }
  e.validate();
  return e;
}

}  // namespace ugnn::eval
