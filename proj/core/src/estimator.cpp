#include "linkcusum/estimator.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace linkcusum {

double empirical_cdf(std::span<const double> sample, double x) {
  if (sample.empty()) {
    throw std::invalid_argument("empirical_cdf: empty sample");
  }
  std::size_t count = 0;
  for (double v : sample) {
    if (v <= x) {
      ++count;
    }
  }
  return static_cast<double>(count) / static_cast<double>(sample.size());
}

double sample_quantile(std::span<const double> sorted, double p) {
  if (sorted.empty()) {
    throw std::invalid_argument("sample_quantile: empty sample");
  }
  if (!(p >= 0.0 && p <= 1.0)) {
    throw std::invalid_argument("sample_quantile: p must be in [0, 1]");
  }
  const double np = static_cast<double>(sorted.size()) * p;
  const double nearest = std::round(np);
  // N*p that is an integer up to fp error means rank N*p exactly, not the
  // next one up (e.g. 100 * 0.05 evaluates to 5.000000000000001).
  double rank = std::abs(np - nearest) <= 1e-9 ? nearest : std::ceil(np);
  rank = std::clamp(rank, 1.0, static_cast<double>(sorted.size()));
  return sorted[static_cast<std::size_t>(rank) - 1];
}

double link_at(std::span<const double> x_column,
               std::span<const double> y_column, double x) {
  if (x_column.empty() || y_column.empty()) {
    throw std::invalid_argument("link_at: empty column");
  }
  std::vector<double> xs(x_column.begin(), x_column.end());
  std::vector<double> ys(y_column.begin(), y_column.end());
  std::sort(xs.begin(), xs.end());
  std::sort(ys.begin(), ys.end());
  const double g = empirical_cdf(ys, x);
  return sample_quantile(xs, g);
}

LinkEstimate estimate_links(const PanelPair& pair,
                            const EvaluationGrid& grid) {
  validate_pair(pair);
  validate_grid(grid);

  const std::size_t n = pair.x.n_times;
  const std::size_t m = grid.size();

  LinkEstimate est;
  est.n_times = n;
  est.n_points = m;
  est.h_hat.resize(n * m);
  est.h_bar.assign(m, 0.0);
  est.sigma_hat.assign(m, 0.0);
  est.degenerate.assign(m, false);

  std::vector<double> x_col;
  std::vector<double> y_col;
  for (std::size_t t = 0; t < n; ++t) {
    pair.x.column(t, x_col);
    pair.y.column(t, y_col);
    std::sort(x_col.begin(), x_col.end());
    std::sort(y_col.begin(), y_col.end());
    for (std::size_t j = 0; j < m; ++j) {
      const double x = grid.points[j];
      // upper_bound gives #{values <= x} on sorted data in O(log N).
      const auto it =
          std::upper_bound(y_col.begin(), y_col.end(), x);
      const double g = static_cast<double>(it - y_col.begin()) /
                       static_cast<double>(y_col.size());
      est.h_hat[t * m + j] = sample_quantile(x_col, g);
    }
  }

  const double dn = static_cast<double>(n);
  for (std::size_t j = 0; j < m; ++j) {
    double sum = 0.0;
    double lo = est.h_hat[j];
    double hi = est.h_hat[j];
    for (std::size_t t = 0; t < n; ++t) {
      const double v = est.h_hat[t * m + j];
      sum += v;
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    est.h_bar[j] = sum / dn;
    if (lo == hi) {
      // All n estimates identical: the variance is exactly zero and the
      // point carries no information about drift.
      est.degenerate[j] = true;
      est.sigma_hat[j] = 0.0;
      continue;
    }
    double ss = 0.0;
    for (std::size_t t = 0; t < n; ++t) {
      const double d = est.h_hat[t * m + j] - est.h_bar[j];
      ss += d * d;
    }
    est.sigma_hat[j] = std::sqrt(ss / dn);
  }
  return est;
}

}  // namespace linkcusum
