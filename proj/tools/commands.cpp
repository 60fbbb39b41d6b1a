#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <vector>

#include "ugnn/common/csv.hpp"
#include "ugnn/common/error.hpp"
#include "ugnn/common/rng.hpp"
#include "ugnn/diffusion/process.hpp"
#include "ugnn/eval/grw.hpp"
#include "ugnn/eval/metrics.hpp"
#include "ugnn/graph/shift.hpp"
#include "ugnn/market/fundamentals.hpp"
#include "ugnn/market/synth.hpp"
#include "ugnn/market/windows.hpp"
#include "ugnn/model/ugnn.hpp"
#include "ugnn/train/checkpoint.hpp"
#include "ugnn/train/run_config.hpp"
#include "ugnn/train/trainer.hpp"

namespace fs = std::filesystem;

namespace ugnn::cli {

namespace {

market::FundamentalsTable random_fundamentals(int n_stocks, int m_indicators,
                                              std::uint64_t seed) {
  market::FundamentalsTable t;
  char buf[16];
  for (int s = 0; s < n_stocks; ++s) {
    std::snprintf(buf, sizeof(buf), "S%03d", s);
    t.tickers.push_back(buf);
  }
  for (int j = 0; j < m_indicators; ++j) {
    t.indicator_names.push_back("ind" + std::to_string(j));
  }
  RngStream rng(seed, /*stream=*/0xF0DA);
  t.indicators = rng.normal_mat(n_stocks, m_indicators);
  return t;
}

Mat adjacency_for_run(const train::RunConfig& rc, const std::vector<std::string>& tickers) {
  if (!rc.adjacency_path.empty()) {
    Mat a = csv::read_matrix(rc.adjacency_path);
    if (a.rows != a.cols) throw DataError("adjacency CSV is not square: " + rc.adjacency_path);
    return a;
  }
  if (!rc.fundamentals_path.empty()) {
    auto fund = market::read_fundamentals_csv(rc.fundamentals_path).aligned_to(tickers);
    return market::build_fundamentals_graph(fund);
  }
  throw ArgumentError("config needs data.adjacency or data.fundamentals");
}

std::vector<diffusion::TrainingExample> to_examples(const std::vector<market::WindowPair>& ws) {
  std::vector<diffusion::TrainingExample> out;
  out.reserve(ws.size());
  for (const auto& w : ws) {
    diffusion::TrainingExample ex;
    ex.x0 = &w.future;
    ex.u = &w.past;
    out.push_back(ex);
  }
  return out;
}

std::string ensemble_filename(int index) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "ensemble_w%04d.csv", index);
  return buf;
}

eval::ForecastEnsemble grw_ensemble_for_history(const Mat& history, int horizon, int n_traj,
                                                std::uint64_t seed) {
  const int n = history.cols;
  std::vector<std::vector<std::vector<double>>> sims(n);  // stock -> traj -> day
  for (int s = 0; s < n; ++s) {
    std::vector<double> past(history.rows);
    for (int d = 0; d < history.rows; ++d) past[d] = history.at(d, s);
    const auto params = eval::fit_grw(past);
    sims[s] = eval::simulate_grw(params, horizon, n_traj,
                                 derive_seed(seed, 0x92130000ULL + static_cast<std::uint64_t>(s)));
  }
  eval::ForecastEnsemble ens;
  ens.trajs.assign(n_traj, Mat(horizon, n));
  for (int t = 0; t < n_traj; ++t) {
    for (int d = 0; d < horizon; ++d) {
      for (int s = 0; s < n; ++s) ens.trajs[t].at(d, s) = sims[s][t][d];
    }
  }
  return ens;
}

}  // namespace

int cmd_synth(const SynthArgs& args) {
  const auto process = market::synth_process_from_string(args.process);
  auto fundamentals = random_fundamentals(args.n_stocks, args.m_indicators, args.seed);

  market::SynthParams params;
  params.mu = args.mu;
  params.sigma = args.sigma;
  params.rho = args.rho;

  graph::GraphShift shift;
  const graph::GraphShift* shift_ptr = nullptr;
  Mat adjacency;
  if (process == market::SynthProcess::graph_var) {
    adjacency = market::build_fundamentals_graph(fundamentals);
    shift = graph::build_shift(adjacency, /*normalize=*/true);
    shift_ptr = &shift;
  }

  const auto table = market::synth_market(args.n_stocks, args.days, shift_ptr, process, params,
                                          derive_seed(args.seed, 0x51C2));
  market::write_prices_csv(args.out_prices, table);
  market::write_fundamentals_csv(args.out_fundamentals, fundamentals);
  if (!args.out_adjacency.empty()) {
    if (adjacency.d.empty()) adjacency = market::build_fundamentals_graph(fundamentals);
    csv::write_matrix(args.out_adjacency, adjacency);
  }
  std::cout << "synth: wrote " << table.n_days() << " days x " << table.n_stocks()
            << " stocks to " << args.out_prices << "\n";
  return 0;
}

int cmd_graph(const GraphArgs& args) {
  const auto fundamentals = market::read_fundamentals_csv(args.fundamentals);
  const Mat adjacency = market::build_fundamentals_graph(fundamentals);
  csv::write_matrix(args.out, adjacency);
  std::cout << "graph: wrote " << adjacency.rows << " x " << adjacency.cols
            << " adjacency to " << args.out << "\n";
  return 0;
}

int cmd_train(const TrainArgs& args) {
  auto rc = train::RunConfig::from_file(args.config);
  if (args.has_seed) rc.train.seed = args.seed;
  if (rc.prices_path.empty()) throw ArgumentError("config needs data.prices");

  const auto prices = market::read_prices_csv(rc.prices_path);
  const auto dataset = market::build_dataset(prices, rc.data);
  if (dataset.train.empty() || dataset.val.empty()) {
    throw DataError("dataset produced empty train or validation split");
  }
  const Mat adjacency = adjacency_for_run(rc, prices.tickers);
  const auto shift = graph::build_shift(adjacency, /*normalize=*/true);

  const auto mc = rc.model_config(dataset.n_nodes, dataset.conditioning_width(),
                                  dataset.t_horizon);
  model::UGnn model(mc, &shift);
  model.init_params(rc.train.seed);
  const auto schedule = rc.make_schedule();

  const auto train_examples = to_examples(dataset.train);
  const auto val_examples = to_examples(dataset.val);
  std::cerr << "train: " << train_examples.size() << " train / " << val_examples.size()
            << " val windows, " << model.params().scalar_count() << " parameters\n";

  const auto outcome = train::train(
      model, train_examples, val_examples, schedule, rc.train,
      [&](const train::EpochReport& r) {
        if (r.epoch % args.log_every == 0 || r.improved) {
          std::cerr << "epoch " << r.epoch << " train " << r.train_loss << " val " << r.val_loss
                    << " lr " << r.lr << (r.improved ? " *" : "") << "\n";
        }
      });

  train::Checkpoint ckpt;
  ckpt.config_text = rc.text;
  ckpt.params = outcome.best_params;
  ckpt.opt_state = outcome.final_state.opt_state;
  ckpt.epoch = outcome.final_state.next_epoch;
  ckpt.rng_state = outcome.final_state.rng_state;
  ckpt.best_val = outcome.best_val;
  ckpt.best_epoch = outcome.best_epoch;
  ckpt.extra["graph.adjacency"] = adjacency;
  train::save_checkpoint(args.out, ckpt);
  std::cout << "train: best val " << outcome.best_val << " at epoch " << outcome.best_epoch
            << " after " << outcome.epochs_run << " epochs; checkpoint " << args.out << "\n";
  return 0;
}

int cmd_sample(const SampleArgs& args) {
  fs::create_directories(args.out_dir);

  // Shared setup: rebuild the dataset that defines the test windows.
  train::RunConfig rc;
  train::Checkpoint ckpt;
  const bool grw_mode = args.model == "grw";
  if (grw_mode) {
    if (args.config.empty()) throw ArgumentError("sample --model grw needs --config");
    rc = train::RunConfig::from_file(args.config);
  } else {
    if (args.checkpoint.empty()) throw ArgumentError("sample needs --checkpoint (or --model grw)");
    ckpt = train::load_checkpoint(args.checkpoint);
    rc = train::RunConfig::from_text(ckpt.config_text);
  }
  if (!args.prices.empty()) rc.prices_path = args.prices;
  if (rc.prices_path.empty()) throw ArgumentError("no prices path in config or --prices");
  const auto prices = market::read_prices_csv(rc.prices_path);
  const auto dataset = market::build_dataset(prices, rc.data);
  if (dataset.test.empty()) throw DataError("dataset has no test windows");
  const int n_traj = args.n_traj > 0 ? args.n_traj : rc.n_traj;

  graph::GraphShift shift;
  std::unique_ptr<model::UGnn> model;
  diffusion::NoiseSchedule schedule;
  if (!grw_mode) {
    auto it = ckpt.extra.find("graph.adjacency");
    const Mat adjacency =
        it != ckpt.extra.end() ? it->second : adjacency_for_run(rc, prices.tickers);
    shift = graph::build_shift(adjacency, /*normalize=*/true);
    const auto mc = rc.model_config(dataset.n_nodes, dataset.conditioning_width(),
                                    dataset.t_horizon);
    model = std::make_unique<model::UGnn>(mc, &shift);
    model->set_params(ckpt.params);
    schedule = rc.make_schedule();
  }

  int written = 0;
  for (int w = 0; w < static_cast<int>(dataset.test.size()); ++w) {
    if (args.window_index >= 0 && w != args.window_index) continue;
    const auto& win = dataset.test[w];
    eval::ForecastEnsemble ens;
    if (grw_mode) {
      ens = grw_ensemble_for_history(transpose(win.past_raw), dataset.t_horizon, n_traj,
                                     derive_seed(args.seed, 0xA1B0000ULL + w));
    } else {
      ens = diffusion::sample(*model, &win.past, schedule, n_traj,
                              derive_seed(args.seed, 0xA1B0000ULL + w), rc.objective);
      for (auto& traj : ens.trajs) {
        traj = dataset.return_norm.destandardize_series(traj);  // day-major, per node
      }
    }
    ens.target = transpose(win.future_raw);
    ens.history = transpose(win.past_raw);
    ens.chunk_id = win.chunk_id;
    ens.day_offset = win.day_offset;
    const std::string path = (fs::path(args.out_dir) / ensemble_filename(w)).string();
    eval::write_ensemble_csv(path, ens);
    ++written;
  }
  if (written == 0) throw ArgumentError("sample: no window matched --window-index");
  std::cout << "sample: wrote " << written << " ensemble files to " << args.out_dir << "\n";
  return 0;
}

int cmd_evaluate(const EvaluateArgs& args) {
  std::vector<std::string> files;
  if (!fs::is_directory(args.ensembles_dir)) {
    throw DataError("not a directory: " + args.ensembles_dir);
  }
  for (const auto& entry : fs::directory_iterator(args.ensembles_dir)) {
    const std::string name = entry.path().filename().string();
    if (name.rfind("ensemble_", 0) == 0 && name.size() > 4 &&
        name.substr(name.size() - 4) == ".csv") {
      files.push_back(entry.path().string());
    }
  }
  if (files.empty()) throw DataError("no ensemble_*.csv files in " + args.ensembles_dir);
  std::sort(files.begin(), files.end());

  const auto conv =
      args.per_day ? eval::ReturnConvention::per_day : eval::ReturnConvention::cumulative;
  double sums[2][4] = {{0, 0, 0, 0}, {0, 0, 0, 0}};
  int t_past = 0, t_horizon = 0;
  for (std::size_t i = 0; i < files.size(); ++i) {
    auto ens = eval::read_ensemble_csv(files[i]);
    if (ens.target.d.empty()) throw DataError("ensemble lacks target rows: " + files[i]);
    if (ens.history.d.empty()) throw DataError("ensemble lacks history rows: " + files[i]);
    t_horizon = ens.horizon();
    t_past = ens.history.rows;

    const int grw_traj = args.grw_traj > 0 ? args.grw_traj : ens.n_traj();
    auto grw = grw_ensemble_for_history(ens.history, ens.horizon(), grw_traj,
                                        derive_seed(args.seed, 0xE7A10000ULL + i));
    grw.target = ens.target;

    sums[0][0] += eval::rmse(ens, conv);
    sums[0][1] += eval::mae(ens, conv);
    sums[0][2] += eval::crps(ens, conv);
    sums[0][3] += eval::mis(ens, args.alpha, conv);
    sums[1][0] += eval::rmse(grw, conv);
    sums[1][1] += eval::mae(grw, conv);
    sums[1][2] += eval::crps(grw, conv);
    sums[1][3] += eval::mis(grw, args.alpha, conv);
  }

  const double inv = 1.0 / static_cast<double>(files.size());
  const char* metric_names[4] = {"rmse", "mae", "crps", "mis"};
  std::vector<eval::MetricRow> rows;
  for (int m = 0; m < 2; ++m) {
    for (int k = 0; k < 4; ++k) {
      eval::MetricRow r;
      r.model = m == 0 ? args.model_name : "grw";
      r.t_past = t_past;
      r.t_horizon = t_horizon;
      r.metric = metric_names[k];
      r.value = sums[m][k] * inv;
      rows.push_back(std::move(r));
    }
  }
  eval::write_metrics_csv(args.out, rows);
  for (const auto& r : rows) {
    std::cout << r.model << " " << r.metric << " " << r.value << "\n";
  }
  return 0;
}

int cmd_plot(const PlotArgs& args) {
  const auto ens = eval::read_ensemble_csv(args.ensemble);
  if (args.node < 0 || args.node >= ens.n_nodes()) {
    throw ArgumentError("plot: node index out of range");
  }
  const int th = ens.horizon();
  const int tp = ens.history.d.empty() ? 0 : ens.history.rows;

  // Cumulative log returns anchored at zero on the last history day.
  std::vector<std::vector<double>> trajs;
  for (const auto& t : ens.trajs) {
    std::vector<double> v(th);
    double acc = 0.0;
    for (int d = 0; d < th; ++d) {
      acc += t.at(d, args.node);
      v[d] = acc;
    }
    trajs.push_back(std::move(v));
  }
  std::vector<double> target;
  if (!ens.target.d.empty()) {
    double acc = 0.0;
    for (int d = 0; d < th; ++d) {
      acc += ens.target.at(d, args.node);
      target.push_back(acc);
    }
  }
  std::vector<double> history(tp, 0.0);
  if (tp > 0) {
    // Anchor the history to end at zero.
    double acc = 0.0;
    std::vector<double> cum(tp);
    for (int d = 0; d < tp; ++d) {
      acc += ens.history.at(d, args.node);
      cum[d] = acc;
    }
    for (int d = 0; d < tp; ++d) history[d] = cum[d] - acc;
  }

  // Per-day 95% band over all trajectories.
  std::vector<double> lo(th), hi(th);
  for (int d = 0; d < th; ++d) {
    std::vector<double> cell;
    cell.reserve(trajs.size());
    for (const auto& t : trajs) cell.push_back(t[d]);
    lo[d] = eval::quantile(cell, 0.025);
    hi[d] = eval::quantile(cell, 0.975);
  }

  double ymin = 0.0, ymax = 0.0;
  auto absorb = [&](double v) {
    ymin = std::min(ymin, v);
    ymax = std::max(ymax, v);
  };
  for (const auto& t : trajs)
    for (double v : t) absorb(v);
  for (double v : target) absorb(v);
  for (double v : history) absorb(v);
  if (ymax - ymin < 1e-12) ymax = ymin + 1e-12;

  const double width = 800, height = 400, margin = 40;
  const double x0 = -tp + 1, x1 = th;
  auto sx = [&](double day) {
    return margin + (day - x0) / (x1 - x0) * (width - 2 * margin);
  };
  auto sy = [&](double v) {
    return height - margin - (v - ymin) / (ymax - ymin) * (height - 2 * margin);
  };
  auto polyline = [&](const std::vector<std::pair<double, double>>& pts, const char* style) {
    std::string s = "<polyline fill=\"none\" " + std::string(style) + " points=\"";
    char buf[64];
    for (const auto& [x, y] : pts) {
      std::snprintf(buf, sizeof(buf), "%.2f,%.2f ", sx(x), sy(y));
      s += buf;
    }
    s += "\"/>\n";
    return s;
  };

  std::ofstream out(args.out);
  if (!out) throw DataError("cannot write SVG: " + args.out);
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
      << height << "\" viewBox=\"0 0 " << width << " " << height << "\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

  // 95% band polygon.
  {
    std::string s = "<polygon fill=\"#2ca02c\" fill-opacity=\"0.2\" stroke=\"none\" points=\"";
    char buf[64];
    for (int d = 0; d < th; ++d) {
      std::snprintf(buf, sizeof(buf), "%.2f,%.2f ", sx(d + 1), sy(hi[d]));
      s += buf;
    }
    for (int d = th - 1; d >= 0; --d) {
      std::snprintf(buf, sizeof(buf), "%.2f,%.2f ", sx(d + 1), sy(lo[d]));
      s += buf;
    }
    s += "\"/>\n";
    out << s;
  }
  // Zero axis and forecast origin.
  out << "<line x1=\"" << sx(x0) << "\" y1=\"" << sy(0) << "\" x2=\"" << sx(x1) << "\" y2=\""
      << sy(0) << "\" stroke=\"#cccccc\"/>\n";
  out << "<line x1=\"" << sx(0) << "\" y1=\"" << margin << "\" x2=\"" << sx(0) << "\" y2=\""
      << height - margin << "\" stroke=\"#cccccc\" stroke-dasharray=\"2,2\"/>\n";

  if (tp > 0) {
    std::vector<std::pair<double, double>> pts;
    for (int d = 0; d < tp; ++d) pts.emplace_back(d - tp + 1, history[d]);
    out << polyline(pts, "stroke=\"black\" stroke-width=\"1.5\"");
  }
  const int shown = std::min<int>(args.max_traj, static_cast<int>(trajs.size()));
  for (int i = 0; i < shown; ++i) {
    std::vector<std::pair<double, double>> pts;
    pts.emplace_back(0.0, 0.0);
    for (int d = 0; d < th; ++d) pts.emplace_back(d + 1, trajs[i][d]);
    out << polyline(pts, "stroke=\"#2ca02c\" stroke-width=\"1\" stroke-dasharray=\"4,3\"");
  }
  if (!target.empty()) {
    std::vector<std::pair<double, double>> pts;
    pts.emplace_back(0.0, 0.0);
    for (int d = 0; d < th; ++d) pts.emplace_back(d + 1, target[d]);
    out << polyline(pts, "stroke=\"#1f77b4\" stroke-width=\"2\"");
  }
  out << "</svg>\n";
  std::cout << "plot: wrote " << args.out << "\n";
  return 0;
}

}  // namespace ugnn::cli
