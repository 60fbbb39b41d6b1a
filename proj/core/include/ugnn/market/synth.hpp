#pragma once

#include <cstdint>

#include "ugnn/graph/shift.hpp"
#include "ugnn/market/price_table.hpp"

namespace ugnn::market {

enum class SynthProcess { grw, graph_var };

SynthProcess synth_process_from_string(const std::string& s);

struct SynthParams {
  double mu = 0.0005;       // grw drift per day
  double sigma = 0.01;      // innovation std per day
  double rho = 0.4;         // graph_var coupling strength
  double p0 = 100.0;        // initial price
  double vol_base = 1e6;    // synthetic volume level
  double vol_noise = 0.1;   // lognormal volume noise
};

/// Synthetic price table for desk-scale validation.
///   grw:       independent geometric random walks, r ~ N(mu, sigma^2) iid.
///   graph_var: log returns follow r_k = rho * S r_{k-1} + sigma * eps_k
///              (graph required; pass a spectrally normalized shift so the
///              recursion is stable for |rho| < 1), then exponentiated to
///              prices.
/// Tickers are S000.., dates d0000.. so label order survives round trips.
PriceTable synth_market(int n_stocks, int days, const graph::GraphShift* graph,
                        SynthProcess process, const SynthParams& params, std::uint64_t seed);

}  // namespace ugnn::market
