#include <CLI11.hpp>
#include <exception>
#include <iostream>

#include "commands.hpp"
#include "ugnn/common/error.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Conditional graph-signal diffusion for probabilistic stock forecasting"};
  app.require_subcommand(1);

  ugnn::cli::SynthArgs synth;
  auto* s = app.add_subcommand("synth", "Generate a synthetic market (prices + fundamentals)");
  s->add_option("--process", synth.process, "grw or graph_var");
  s->add_option("--n", synth.n_stocks, "number of stocks");
  s->add_option("--days", synth.days, "number of trading days");
  s->add_option("--seed", synth.seed, "RNG seed");
  s->add_option("--mu", synth.mu, "grw drift per day");
  s->add_option("--sigma", synth.sigma, "innovation std per day");
  s->add_option("--rho", synth.rho, "graph_var coupling strength");
  s->add_option("--m-indicators", synth.m_indicators, "fundamentals columns");
  s->add_option("--out-prices", synth.out_prices, "prices CSV path");
  s->add_option("--out-fundamentals", synth.out_fundamentals, "fundamentals CSV path");
  s->add_option("--out-adjacency", synth.out_adjacency, "optional adjacency CSV path");

  ugnn::cli::GraphArgs graph;
  auto* g = app.add_subcommand("graph", "Build the fundamentals-correlation adjacency");
  g->add_option("--fundamentals", graph.fundamentals, "fundamentals CSV")->required();
  g->add_option("--out", graph.out, "adjacency CSV path");

  ugnn::cli::TrainArgs train;
  auto* t = app.add_subcommand("train", "Train the denoiser from a config file");
  t->add_option("--config", train.config, "run config file")->required();
  t->add_option("--out", train.out, "checkpoint path");
  auto* seed_opt = t->add_option("--seed", train.seed, "override train.seed");
  t->add_option("--log-every", train.log_every, "progress line interval");

  ugnn::cli::SampleArgs sample;
  auto* sa = app.add_subcommand("sample", "Sample forecast ensembles for the test windows");
  sa->add_option("--checkpoint", sample.checkpoint, "trained checkpoint");
  sa->add_option("--model", sample.model, "'grw' to sample the baseline instead");
  sa->add_option("--config", sample.config, "run config (grw mode)");
  sa->add_option("--prices", sample.prices, "override the config prices path");
  sa->add_option("--out", sample.out_dir, "output directory");
  sa->add_option("--ntraj", sample.n_traj, "trajectories per window");
  sa->add_option("--seed", sample.seed, "sampling seed");
  sa->add_option("--window-index", sample.window_index, "sample a single test window");

  ugnn::cli::EvaluateArgs evaluate;
  auto* e = app.add_subcommand("evaluate", "Score ensembles against the GRW baseline");
  e->add_option("--ensembles", evaluate.ensembles_dir, "directory of ensemble CSVs")->required();
  e->add_option("--out", evaluate.out, "metrics CSV path");
  e->add_option("--model-name", evaluate.model_name, "label for the candidate model");
  e->add_option("--alpha", evaluate.alpha, "interval score level");
  e->add_option("--grw-ntraj", evaluate.grw_traj, "baseline trajectories (default: match)");
  e->add_option("--seed", evaluate.seed, "baseline sampling seed");
  e->add_flag("--per-day", evaluate.per_day, "score per-day instead of cumulative returns");

  ugnn::cli::PlotArgs plot;
  auto* p = app.add_subcommand("plot", "Render an ensemble CSV as an SVG fan chart");
  p->add_option("--ensemble", plot.ensemble, "ensemble CSV")->required();
  p->add_option("--out", plot.out, "SVG path");
  p->add_option("--node", plot.node, "stock index to plot");
  p->add_option("--max-traj", plot.max_traj, "trajectories to draw");

  try {
    app.parse(argc, argv);
    train.has_seed = seed_opt->count() > 0;
    if (s->parsed()) return ugnn::cli::cmd_synth(synth);
    if (g->parsed()) return ugnn::cli::cmd_graph(graph);
    if (t->parsed()) return ugnn::cli::cmd_train(train);
    if (sa->parsed()) return ugnn::cli::cmd_sample(sample);
    if (e->parsed()) return ugnn::cli::cmd_evaluate(evaluate);
    if (p->parsed()) return ugnn::cli::cmd_plot(plot);
    return 1;
  } catch (const CLI::ParseError& err) {
    const int code = app.exit(err);
    return code == 0 ? 0 : 1;
  } catch (const ugnn::DataError& err) {
    std::cerr << "data error: " << err.what() << "\n";
    return 2;
  } catch (const ugnn::NumericError& err) {
    std::cerr << "numeric error: " << err.what() << "\n";
    return 3;
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << "\n";
    return 1;
  }
}
