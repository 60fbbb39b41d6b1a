#pragma once

#include <string>
#include <vector>

#include "ugnn/common/mat.hpp"

namespace ugnn::market {

/// Daily adjusted-close prices for N tickers plus any extra per-day columns
/// (volume, ...). Tickers are sorted lexicographically and dates ascending;
/// gaps are forward-filled at ingestion and days before every ticker has a
/// first print are dropped, so the matrices are dense afterwards.
struct PriceTable {
  std::vector<std::string> tickers;
  std::vector<std::string> dates;
  Mat prices;  // days x N, strictly positive
  std::vector<std::string> extra_names;
  std::vector<Mat> extras;  // each days x N

  int n_days() const { return prices.rows; }
  int n_stocks() const { return prices.cols; }
  const Mat* extra(const std::string& name) const;
  void validate() const;
};

/// CSV with header date,ticker,adj_close[,<extra>...], one row per
/// (date, ticker).
PriceTable read_prices_csv(const std::string& path);
void write_prices_csv(const std::string& path, const PriceTable& table);

/// Daily log returns r_k = ln(p_{k+1} / p_k); (days-1) x N.
/// Non-positive prices raise a data error naming the ticker and date.
Mat log_returns(const PriceTable& table);
Mat log_returns(const Mat& prices);

}  // namespace ugnn::market
