#include "ugnn/market/fundamentals.hpp"

#include <cmath>
#include <fstream>
#include <iostream>
#include <map>

#include "ugnn/common/csv.hpp"
#include "ugnn/common/error.hpp"

namespace ugnn::market {

FundamentalsTable FundamentalsTable::aligned_to(const std::vector<std::string>& order) const {
  if (order.size() != tickers.size()) {
    throw DataError("fundamentals: ticker set differs from price table");
  }
  std::map<std::string, int> pos;
  for (int i = 0; i < n_stocks(); ++i) pos[tickers[i]] = i;
  FundamentalsTable out;
  out.tickers = order;
  out.indicator_names = indicator_names;
  out.indicators = Mat(n_stocks(), n_indicators());
  for (int i = 0; i < static_cast<int>(order.size()); ++i) {
    auto it = pos.find(order[i]);
    if (it == pos.end()) throw DataError("fundamentals: missing ticker " + order[i]);
    for (int j = 0; j < n_indicators(); ++j) out.indicators.at(i, j) = indicators.at(it->second, j);
  }
  return out;
}

FundamentalsTable read_fundamentals_csv(const std::string& path) {
  auto lines = csv::read_lines(path);
  if (lines.size() < 2) throw DataError("fundamentals CSV needs a header and rows: " + path);
  auto header = csv::split_line(lines[0]);
  if (header.size() < 3 || header[0] != "ticker") {
    throw DataError("fundamentals CSV header must be ticker,<indicator>...: " + path);
  }
  FundamentalsTable t;
  t.indicator_names.assign(header.begin() + 1, header.end());
  const int m = static_cast<int>(t.indicator_names.size());
  std::vector<std::vector<double>> rows;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    auto f = csv::split_line(lines[i]);
    if (static_cast<int>(f.size()) != m + 1) {
      throw DataError("fundamentals CSV row has wrong field count at " + path + ":" +
                      std::to_string(i + 1));
    }
    t.tickers.push_back(f[0]);
    std::vector<double> row;
    for (int j = 0; j < m; ++j) {
      row.push_back(csv::parse_double(f[j + 1], path + ":" + std::to_string(i + 1)));
    }
    rows.push_back(std::move(row));
  }
  t.indicators = Mat(static_cast<int>(rows.size()), m);
  for (int i = 0; i < t.indicators.rows; ++i)
    for (int j = 0; j < m; ++j) t.indicators.at(i, j) = rows[i][j];
  return t;
}

void write_fundamentals_csv(const std::string& path, const FundamentalsTable& table) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write fundamentals CSV: " + path);
  out << "ticker";
  for (const auto& name : table.indicator_names) out << ',' << name;
  out << '\n';
  for (int i = 0; i < table.n_stocks(); ++i) {
    out << table.tickers[i];
    for (int j = 0; j < table.n_indicators(); ++j) {
      out << ',' << format_double(table.indicators.at(i, j));
    }
    out << '\n';
  }
}

Mat build_fundamentals_graph(const FundamentalsTable& fundamentals) {
  const int n = fundamentals.n_stocks();
  const int m = fundamentals.n_indicators();
  if (m < 2) throw DataError("build_fundamentals_graph: need at least 2 indicators");
  if (n < 2) throw DataError("build_fundamentals_graph: need at least 2 stocks");
  for (double x : fundamentals.indicators.d) {
    if (!std::isfinite(x)) throw DataError("build_fundamentals_graph: non-finite indicator");
  }

  // Z-score columns; drop the degenerate ones.
  std::vector<std::vector<double>> cols;
  for (int j = 0; j < m; ++j) {
    double mean = 0.0;
    for (int i = 0; i < n; ++i) mean += fundamentals.indicators.at(i, j);
    mean /= n;
    double var = 0.0;
    for (int i = 0; i < n; ++i) {
      const double dev = fundamentals.indicators.at(i, j) - mean;
      var += dev * dev;
    }
    var /= n;
    const double std = std::sqrt(var);
    if (std < 1e-12) {
      std::cerr << "warning: dropping zero-variance indicator '"
                << fundamentals.indicator_names[j] << "'\n";
      continue;
    }
    std::vector<double> col(n);
    for (int i = 0; i < n; ++i) col[i] = (fundamentals.indicators.at(i, j) - mean) / std;
    cols.push_back(std::move(col));
  }
  if (cols.size() < 2) {
    throw DataError("build_fundamentals_graph: fewer than 2 usable indicator columns");
  }
  const int mk = static_cast<int>(cols.size());

  // Pearson correlation between stock rows of the z-scored table.
  std::vector<double> row_mean(n, 0.0), row_std(n, 0.0);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < mk; ++j) row_mean[i] += cols[j][i];
    row_mean[i] /= mk;
    double var = 0.0;
    for (int j = 0; j < mk; ++j) {
      const double dev = cols[j][i] - row_mean[i];
      var += dev * dev;
    }
    row_std[i] = std::sqrt(var / mk);
  }
  Mat adj(n, n);
  for (int i = 0; i < n; ++i) {
    for (int k = i + 1; k < n; ++k) {
      double corr = 0.0;
      if (row_std[i] >= 1e-12 && row_std[k] >= 1e-12) {
        double cov = 0.0;
        for (int j = 0; j < mk; ++j) {
          cov += (cols[j][i] - row_mean[i]) * (cols[j][k] - row_mean[k]);
        }
        cov /= mk;
        corr = cov / (row_std[i] * row_std[k]);
        corr = std::fabs(corr);
        corr = std::min(corr, 1.0);
      }
      adj.at(i, k) = corr;
      adj.at(k, i) = corr;
    }
  }
  return adj;
}

}  // namespace ugnn::market
