#pragma once

#include <span>
#include <vector>

namespace dyadic {

struct ChiSquareResult {
  double statistic = 0.0;
  int dof = 0;
  double p_value = 1.0;
};

// Pearson test of independence on a contingency table (rows x columns of
// counts). All-zero rows and columns are dropped first; a table left with
// fewer than two rows or columns has dof 0 and p-value 1.
ChiSquareResult chi_square_independence(const std::vector<std::vector<double>>& table);

// Merges rows whose smallest expected count falls below `min_expected` into a
// single pooled row (appended last). Column totals are unchanged.
std::vector<std::vector<double>> pool_sparse_rows(const std::vector<std::vector<double>>& table,
                                                  double min_expected = 5.0);

// Upper tail of the chi-square distribution.
double chi_square_sf(double statistic, int dof);

struct MeanSe {
  double mean = 0.0;
  double se = 0.0;
};

// Sample mean and standard error (n - 1 denominator); se = 0 for n = 1.
// Throws InvalidInput on empty input.
MeanSe mean_se(std::span<const double> values);

}  // namespace dyadic
