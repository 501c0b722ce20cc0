#include "linkcusum/cusum.hpp"

#include <cmath>
#include <stdexcept>

namespace linkcusum {

std::vector<double> cusum_path(std::span<const double> h_column,
                               double sigma_hat) {
  const std::size_t n = h_column.size();
  if (n == 0) {
    throw std::invalid_argument("cusum_path: empty column");
  }
  std::vector<double> path(n, 0.0);
  if (!(sigma_hat > 0.0)) {
    return path;
  }
  // Accumulate the total with the same left-to-right order as the prefix
  // sums so path[n-1] is exactly prefix - (n/n) * prefix = 0.
  double total = 0.0;
  for (double v : h_column) {
    total += v;
  }
  const double dn = static_cast<double>(n);
  const double scale = 1.0 / (sigma_hat * std::sqrt(dn));
  double prefix = 0.0;
  for (std::size_t k = 1; k <= n; ++k) {
    prefix += h_column[k - 1];
    path[k - 1] =
        scale * (prefix - (static_cast<double>(k) / dn) * total);
  }
  return path;
}

double sup_statistic(std::span<const double> path) {
  if (path.empty()) {
    throw std::invalid_argument("sup_statistic: empty path");
  }
  double sup = 0.0;
  for (double v : path) {
    sup = std::max(sup, std::abs(v));
  }
  return sup;
}

double weighted_average_statistic(std::span<const double> a_values,
                                  std::span<const double> weights) {
  if (a_values.empty() || a_values.size() != weights.size()) {
    throw std::invalid_argument(
        "weighted_average_statistic: size mismatch or empty input");
  }
  double sum = 0.0;
  for (std::size_t j = 0; j < a_values.size(); ++j) {
    sum += weights[j] * a_values[j];
  }
  return sum / static_cast<double>(a_values.size());
}

CusumResult s_m_statistic(const LinkEstimate& estimate,
                          const EvaluationGrid& grid) {
  if (estimate.n_points != grid.size()) {
    throw std::invalid_argument(
        "s_m_statistic: estimate and grid disagree on point count");
  }
  CusumResult result;
  result.a_values.resize(estimate.n_points);
  std::vector<double> column(estimate.n_times);
  for (std::size_t j = 0; j < estimate.n_points; ++j) {
    for (std::size_t t = 0; t < estimate.n_times; ++t) {
      column[t] = estimate.at(t, j);
    }
    if (estimate.degenerate[j]) {
      result.a_values[j] = 0.0;
      result.degenerate_points.push_back(j);
      continue;
    }
    const std::vector<double> path = cusum_path(column, estimate.sigma_hat[j]);
    result.a_values[j] = sup_statistic(path);
  }
  result.s_m = weighted_average_statistic(result.a_values, grid.weights);
  return result;
}

}  // namespace linkcusum
