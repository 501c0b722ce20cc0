#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "linkcusum/estimator.hpp"
#include "linkcusum/panel.hpp"

namespace linkcusum {

struct CusumResult {
  std::vector<double> a_values;  // sup statistic per grid point
  double s_m = 0.0;              // weighted average of a_values
  // Grid points whose link estimates were constant over t; their a_values
  // are 0 and they still count in the 1/M average.
  std::vector<std::size_t> degenerate_points;
};

// Standardized partial-sum bridge of one grid point's link sequence,
// evaluated at k = 1..n:
//   path[k-1] = (sum_{t<=k} h_t - (k/n) * sum_{t<=n} h_t) / (sigma * sqrt(n))
// The k = n entry is exactly 0 by construction. sigma <= 0 yields all
// zeros (degenerate point).
std::vector<double> cusum_path(std::span<const double> h_column,
                               double sigma_hat);

// max_k |path[k]|
double sup_statistic(std::span<const double> path);

// (1/M) * sum_j weights[j] * a_values[j]
double weighted_average_statistic(std::span<const double> a_values,
                                  std::span<const double> weights);

CusumResult s_m_statistic(const LinkEstimate& estimate,
                          const EvaluationGrid& grid);

}  // namespace linkcusum
