#include "ugnn/market/synth.hpp"

#include <cmath>
#include <cstdio>

#include "ugnn/common/error.hpp"
#include "ugnn/common/rng.hpp"

namespace ugnn::market {

SynthProcess synth_process_from_string(const std::string& s) {
  if (s == "grw") return SynthProcess::grw;
  if (s == "graph_var") return SynthProcess::graph_var;
  throw ArgumentError("unknown synthetic process: " + s);
}

PriceTable synth_market(int n_stocks, int days, const graph::GraphShift* graph,
                        SynthProcess process, const SynthParams& params, std::uint64_t seed) {
  if (n_stocks < 1) throw ArgumentError("synth_market: n_stocks must be >= 1");
  if (days < 2) throw ArgumentError("synth_market: days must be >= 2");
  if (params.sigma < 0.0) throw ArgumentError("synth_market: sigma must be >= 0");
  if (!(params.p0 > 0.0)) throw ArgumentError("synth_market: p0 must be positive");
  if (process == SynthProcess::graph_var) {
    if (graph == nullptr) throw ArgumentError("synth_market: graph_var needs a graph");
    if (graph->n_nodes() != n_stocks) {
      throw StructuralError("synth_market: graph size != n_stocks");
    }
  }

  const int n_ret = days - 1;
  Mat returns(n_ret, n_stocks);
  RngStream rng(seed, /*stream=*/0x5A17);
  if (process == SynthProcess::grw) {
    for (int d = 0; d < n_ret; ++d) {
      for (int s = 0; s < n_stocks; ++s) {
        returns.at(d, s) = params.mu + params.sigma * rng.normal();
      }
    }
  } else {
    Mat prev(n_stocks, 1);
    for (int d = 0; d < n_ret; ++d) {
      Mat coupled = d == 0 ? Mat(n_stocks, 1) : scale(graph->apply(prev), params.rho);
      for (int s = 0; s < n_stocks; ++s) {
        coupled.at(s, 0) += params.sigma * rng.normal();
        returns.at(d, s) = coupled.at(s, 0);
      }
      prev = std::move(coupled);
    }
  }

  PriceTable t;
  char buf[16];
  for (int s = 0; s < n_stocks; ++s) {
    std::snprintf(buf, sizeof(buf), "S%03d", s);
    t.tickers.push_back(buf);
  }
  for (int d = 0; d < days; ++d) {
    std::snprintf(buf, sizeof(buf), "d%05d", d);
    t.dates.push_back(buf);
  }
  t.prices = Mat(days, n_stocks);
  for (int s = 0; s < n_stocks; ++s) {
    double logp = std::log(params.p0);
    t.prices.at(0, s) = params.p0;
    for (int d = 0; d < n_ret; ++d) {
      logp += returns.at(d, s);
      t.prices.at(d + 1, s) = std::exp(logp);
    }
  }
  t.extra_names.push_back("volume");
  Mat volume(days, n_stocks);
  for (auto& v : volume.d) v = params.vol_base * std::exp(params.vol_noise * rng.normal());
  t.extras.push_back(std::move(volume));
  t.validate();
  return t;
}

}  // namespace ugnn::market
