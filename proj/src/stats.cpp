#include "dyadic/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <boost/math/special_functions/gamma.hpp>

#include "dyadic/errors.hpp"

namespace dyadic {
namespace {

std::vector<std::vector<double>> drop_empty(const std::vector<std::vector<double>>& table) {
  std::size_t cols = 0;
  for (const auto& row : table) cols = std::max(cols, row.size());
  std::vector<double> col_sum(cols, 0.0);
  std::vector<std::vector<double>> rows;
  for (const auto& row : table) {
    for (double v : row)
      if (!(v >= 0.0) || !std::isfinite(v)) throw InvalidInput("contingency counts must be finite and >= 0");
    if (std::accumulate(row.begin(), row.end(), 0.0) > 0.0) {
      std::vector<double> r(row);
      r.resize(cols, 0.0);
      for (std::size_t j = 0; j < cols; ++j) col_sum[j] += r[j];
      rows.push_back(std::move(r));
    }
  }
  std::vector<std::vector<double>> out(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < cols; ++j)
      if (col_sum[j] > 0.0) out[i].push_back(rows[i][j]);
  return out;
}

}  // namespace

double chi_square_sf(double statistic, int dof) {
  if (dof <= 0) return 1.0;
  if (statistic <= 0.0) return 1.0;
  return boost::math::gamma_q(dof / 2.0, statistic / 2.0);
}

ChiSquareResult chi_square_independence(const std::vector<std::vector<double>>& table) {
  const auto t = drop_empty(table);
  ChiSquareResult res;
  if (t.size() < 2 || t.front().size() < 2) return res;
  const std::size_t r = t.size(), c = t.front().size();
  std::vector<double> row_sum(r, 0.0), col_sum(c, 0.0);
  double total = 0.0;
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j) {
      row_sum[i] += t[i][j];
      col_sum[j] += t[i][j];
      total += t[i][j];
    }
  double stat = 0.0;
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j) {
      const double e = row_sum[i] * col_sum[j] / total;
      stat += (t[i][j] - e) * (t[i][j] - e) / e;
    }
  res.statistic = stat;
  res.dof = static_cast<int>((r - 1) * (c - 1));
  res.p_value = chi_square_sf(stat, res.dof);
  return res;
}

std::vector<std::vector<double>> pool_sparse_rows(const std::vector<std::vector<double>>& table,
                                                  double min_expected) {
  const auto t = drop_empty(table);
  if (t.empty()) return t;
  const std::size_t c = t.front().size();
  std::vector<double> col_sum(c, 0.0);
  double total = 0.0;
  for (const auto& row : t)
    for (std::size_t j = 0; j < c; ++j) {
      col_sum[j] += row[j];
      total += row[j];
    }
  const double min_col = *std::min_element(col_sum.begin(), col_sum.end());
  std::vector<std::vector<double>> out;
  std::vector<double> pooled(c, 0.0);
  bool any_pooled = false;
  for (const auto& row : t) {
    const double row_total = std::accumulate(row.begin(), row.end(), 0.0);
    if (row_total * min_col / total < min_expected) {
      for (std::size_t j = 0; j < c; ++j) pooled[j] += row[j];
      any_pooled = true;
    } else {
      out.push_back(row);
    }
  }
  if (any_pooled) out.push_back(std::move(pooled));
  return out;
}

MeanSe mean_se(std::span<const double> values) {
  if (values.empty()) throw InvalidInput("mean_se: no values");
  const double n = static_cast<double>(values.size());
  double sum = 0.0;
  for (double v : values) sum += v;
  MeanSe out;
  out.mean = sum / n;
  if (values.size() < 2) return out;
  double ss = 0.0;
  for (double v : values) ss += (v - out.mean) * (v - out.mean);
  out.se = std::sqrt(ss / (n - 1.0) / n);
  return out;
}

}  // namespace dyadic
