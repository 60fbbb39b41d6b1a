#pragma once

#include <cstdint>
#include <string>

namespace ugnn::cli {

struct SynthArgs {
  std::string process = "graph_var";
  int n_stocks = 20;
  int days = 1500;
  std::uint64_t seed = 1;
  double mu = 0.0005;
  double sigma = 0.01;
  double rho = 0.4;
  int m_indicators = 6;
  std::string out_prices = "prices.csv";
  std::string out_fundamentals = "fundamentals.csv";
  std::string out_adjacency;  // optional
};

struct GraphArgs {
  std::string fundamentals;
  std::string out = "adjacency.csv";
};

struct TrainArgs {
  std::string config;
  std::string out = "model.ckpt";
  bool has_seed = false;
  std::uint64_t seed = 0;
  int log_every = 25;
};

struct SampleArgs {
  std::string checkpoint;
  std::string model;  // "grw" bypasses the checkpoint
  std::string config;
  std::string prices;  // overrides the config path
  std::string out_dir = "ensembles";
  int n_traj = 0;  // 0 = from config
  std::uint64_t seed = 1;
  int window_index = -1;  // -1 = every test window
};

struct EvaluateArgs {
  std::string ensembles_dir;
  std::string out = "metrics.csv";
  std::string model_name = "ugnn";
  double alpha = 0.05;
  int grw_traj = 0;  // 0 = match the ensemble
  std::uint64_t seed = 1;
  bool per_day = false;
};

struct PlotArgs {
  std::string ensemble;
  std::string out = "forecast.svg";
  int node = 0;
  int max_traj = 10;
};

int cmd_synth(const SynthArgs& args);
int cmd_graph(const GraphArgs& args);
int cmd_train(const TrainArgs& args);
int cmd_sample(const SampleArgs& args);
int cmd_evaluate(const EvaluateArgs& args);
int cmd_plot(const PlotArgs& args);

}  // namespace ugnn::cli
