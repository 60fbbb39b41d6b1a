#include "ugnn/market/price_table.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>

#include "ugnn/common/csv.hpp"
#include "ugnn/common/error.hpp"

namespace ugnn::market {

const Mat* PriceTable::extra(const std::string& name) const {
  for (std::size_t i = 0; i < extra_names.size(); ++i) {
    if (extra_names[i] == name) return &extras[i];
  }
  return nullptr;
}

void PriceTable::validate() const {
  if (prices.rows != static_cast<int>(dates.size()) ||
      prices.cols != static_cast<int>(tickers.size())) {
    throw StructuralError("PriceTable: matrix shape disagrees with labels");
  }
  for (double p : prices.d) {
    if (!(p > 0.0) || !std::isfinite(p)) {
      throw DataError("PriceTable: prices must be strictly positive and finite");
    }
  }
  for (std::size_t i = 1; i < dates.size(); ++i) {
    if (!(dates[i - 1] < dates[i])) throw DataError("PriceTable: dates not strictly increasing");
  }
  for (const auto& e : extras) {
    if (!e.same_shape(prices)) throw StructuralError("PriceTable: extra column shape mismatch");
  }
}

PriceTable read_prices_csv(const std::string& path) {
  auto lines = csv::read_lines(path);
  if (lines.size() < 2) throw DataError("prices CSV needs a header and rows: " + path);
  auto header = csv::split_line(lines[0]);
  if (header.size() < 3 || header[0] != "date" || header[1] != "ticker" ||
      header[2] != "adj_close") {
    throw DataError("prices CSV header must start with date,ticker,adj_close: " + path);
  }
  const int n_extra = static_cast<int>(header.size()) - 3;

  std::map<std::string, int> date_ix, ticker_ix;
  struct Row {
    int date, ticker;
    double close;
    std::vector<double> extra;
  };
  std::vector<Row> rows;
  rows.reserve(lines.size());
  for (std::size_t i = 1; i < lines.size(); ++i) {
    auto f = csv::split_line(lines[i]);
    if (static_cast<int>(f.size()) != 3 + n_extra) {
      throw DataError("prices CSV row has wrong field count at " + path + ":" +
                      std::to_string(i + 1));
    }
    const std::string ctx = path + ":" + std::to_string(i + 1);
    Row r;
    r.date = static_cast<int>(date_ix.emplace(f[0], date_ix.size()).first->second);
    r.ticker = static_cast<int>(ticker_ix.emplace(f[1], ticker_ix.size()).first->second);
    r.close = csv::parse_double(f[2], ctx);
    for (int e = 0; e < n_extra; ++e) r.extra.push_back(csv::parse_double(f[3 + e], ctx));
    rows.push_back(std::move(r));
  }

  // std::map iterates keys in sorted order; rebuild the index maps so column
  // and row order follow sorted tickers / ascending dates.
  PriceTable t;
  std::vector<int> date_remap(date_ix.size()), ticker_remap(ticker_ix.size());
  {
    int k = 0;
    for (auto& [date, old_ix] : date_ix) {
      t.dates.push_back(date);
      date_remap[old_ix] = k++;
    }
    k = 0;
    for (auto& [ticker, old_ix] : ticker_ix) {
      t.tickers.push_back(ticker);
      ticker_remap[old_ix] = k++;
    }
  }
  const int days = static_cast<int>(t.dates.size());
  const int n = static_cast<int>(t.tickers.size());
  Mat close = Mat::full(days, n, -1.0);  // -1 marks a missing cell
  std::vector<Mat> extras(n_extra, Mat::full(days, n, -1.0));
  for (const auto& r : rows) {
    const int d = date_remap[r.date];
    const int s = ticker_remap[r.ticker];
    if (close.at(d, s) >= 0.0) {
      throw DataError("duplicate (date,ticker) row: " + t.dates[d] + "," + t.tickers[s]);
    }
    close.at(d, s) = r.close;
    for (int e = 0; e < n_extra; ++e) extras[e].at(d, s) = r.extra[e];
  }

  // Drop leading days until every ticker has printed once, then forward-fill.
  int start = 0;
  for (int s = 0; s < n; ++s) {
    int first = 0;
    while (first < days && close.at(first, s) < 0.0) ++first;
    if (first == days) throw DataError("ticker has no data at all: " + t.tickers[s]);
    start = std::max(start, first);
  }
  const int kept = days - start;
  t.prices = Mat(kept, n);
  for (int e = 0; e < n_extra; ++e) t.extras.push_back(Mat(kept, n));
  t.extra_names.assign(header.begin() + 3, header.end());
  for (int s = 0; s < n; ++s) {
    double last_close = -1.0;
    std::vector<double> last_extra(n_extra, 0.0);
    for (int d = start; d < days; ++d) {
      double c = close.at(d, s);
      if (c < 0.0) {
        c = last_close;  // forward fill
        for (int e = 0; e < n_extra; ++e) t.extras[e].at(d - start, s) = last_extra[e];
      } else {
        for (int e = 0; e < n_extra; ++e) {
          last_extra[e] = extras[e].at(d, s);
          t.extras[e].at(d - start, s) = last_extra[e];
        }
      }
      t.prices.at(d - start, s) = c;
      last_close = c;
    }
  }
  t.dates.erase(t.dates.begin(), t.dates.begin() + start);
  t.validate();
  return t;
}

void write_prices_csv(const std::string& path, const PriceTable& table) {
  table.validate();
  std::ofstream out(path);
  if (!out) throw DataError("cannot write prices CSV: " + path);
  out << "date,ticker,adj_close";
  for (const auto& name : table.extra_names) out << ',' << name;
  out << '\n';
  for (int d = 0; d < table.n_days(); ++d) {
    for (int s = 0; s < table.n_stocks(); ++s) {
      out << table.dates[d] << ',' << table.tickers[s] << ','
          << format_double(table.prices.at(d, s));
      for (const auto& e : table.extras) out << ',' << format_double(e.at(d, s));
      out << '\n';
    }
  }
}

Mat log_returns(const Mat& prices) {
  if (prices.rows < 2) throw ArgumentError("log_returns: need at least two days");
  Mat out(prices.rows - 1, prices.cols);
  for (int d = 0; d + 1 < prices.rows; ++d) {
    for (int s = 0; s < prices.cols; ++s) {
      const double p0 = prices.at(d, s);
      const double p1 = prices.at(d + 1, s);
      if (!(p0 > 0.0) || !(p1 > 0.0)) {
        throw DataError("log_returns: non-positive price at day " + std::to_string(d) +
                        ", column " + std::to_string(s));
      }
      out.at(d, s) = std::log(p1 / p0);
    }
  }
  return out;
}

Mat log_returns(const PriceTable& table) {
  if (table.n_days() < 2) throw ArgumentError("log_returns: need at least two days");
  Mat out(table.n_days() - 1, table.n_stocks());
  for (int d = 0; d + 1 < table.n_days(); ++d) {
    for (int s = 0; s < table.n_stocks(); ++s) {
      const double p0 = table.prices.at(d, s);
      const double p1 = table.prices.at(d + 1, s);
      if (!(p0 > 0.0) || !(p1 > 0.0)) {
        throw DataError("log_returns: non-positive price for " + table.tickers[s] + " at " +
                        table.dates[p0 > 0.0 ? d + 1 : d]);
      }
      out.at(d, s) = std::log(p1 / p0);
    }
  }
  return out;
}

}  // namespace ugnn::market
