#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "linkcusum/panel.hpp"

namespace linkcusum {

// Cross-sectional link estimates over an evaluation grid.
struct LinkEstimate {
  std::size_t n_times = 0;
  std::size_t n_points = 0;
  // t-major: h_hat[t * n_points + j] estimates the link at grid point j
  // from the time-t cross section.
  std::vector<double> h_hat;
  std::vector<double> h_bar;      // per grid point, mean over t
  std::vector<double> sigma_hat;  // per grid point, sqrt of the 1/n variance
  // Marks grid points whose n estimates were all identical; sigma_hat is 0
  // there and downstream statistics treat the point as uninformative.
  std::vector<bool> degenerate;

  double at(std::size_t t, std::size_t point) const {
    return h_hat[t * n_points + point];
  }
};

// Fraction of the sample <= x. Throws std::invalid_argument on empty input.
double empirical_cdf(std::span<const double> sample, double x);

// Order statistic at probability p of an ascending-sorted sample: the
// ceil(N*p)-th smallest, clamped to [1, N]. Near-integer N*p (within 1e-9)
// snaps to the integer so exact levels are not pushed up a rank by
// floating-point noise. Throws std::invalid_argument on empty input or
// p outside [0, 1].
double sample_quantile(std::span<const double> sorted, double p);

// Single cross-section link estimate: the x-panel order statistic at the
// empirical y-CDF rank of the evaluation point. Columns need not be
// sorted.
double link_at(std::span<const double> x_column, std::span<const double> y_column,
               double x);

// Estimates the link at every (t, grid point) and the per-point moments.
LinkEstimate estimate_links(const PanelPair& pair, const EvaluationGrid& grid);

}  // namespace linkcusum
