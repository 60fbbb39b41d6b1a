#pragma once

#include <string>
#include <vector>

#include "ugnn/common/mat.hpp"

namespace ugnn::market {

/// Long-term per-stock indicators (market cap, trailing P/E, margins, ...).
/// Indicators must be numeric; categorical columns are not supported.
struct FundamentalsTable {
  std::vector<std::string> tickers;
  std::vector<std::string> indicator_names;
  Mat indicators;  // N x M

  int n_stocks() const { return indicators.rows; }
  int n_indicators() const { return indicators.cols; }

  /// Reorders rows to match the given ticker order; errors when the sets
  /// differ.
  FundamentalsTable aligned_to(const std::vector<std::string>& order) const;
};

/// CSV with header ticker,<indicator>... and one row per stock.
FundamentalsTable read_fundamentals_csv(const std::string& path);
void write_fundamentals_csv(const std::string& path, const FundamentalsTable& table);

/// Normalized-correlation adjacency: z-score every indicator column across
/// stocks (zero-variance columns are dropped with a warning on stderr),
/// take the absolute Pearson correlation between stock rows, zero the
/// diagonal. Entries lie in [0, 1] and the matrix is exactly symmetric.
Mat build_fundamentals_graph(const FundamentalsTable& fundamentals);

}  // namespace ugnn::market
