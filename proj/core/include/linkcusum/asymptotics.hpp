#pragma once

#include <cstddef>

namespace linkcusum {

// Distribution of sup_{0<=tau<=1} |B(tau)| for a standard Brownian bridge:
//   F(z) = 1 + 2 * sum_{k>=1} (-1)^k exp(-2 k^2 z^2)
double kolmogorov_cdf(double z, int truncation = 100,
                      double tolerance = 1e-12);

// Inverse of kolmogorov_cdf by bisection. Requires p in (0, 1).
double kolmogorov_quantile(double p, int truncation = 100,
                           double tolerance = 1e-12);

struct KolmogorovLaw {
  int truncation = 100;
  double tolerance = 1e-12;

  double cdf(double z) const { return kolmogorov_cdf(z, truncation, tolerance); }
  double quantile(double p) const {
    return kolmogorov_quantile(p, truncation, tolerance);
  }
};

struct SinglePointTest {
  double p_value = 1.0;
  bool reject = false;
};

// Large-sample test at one grid point: the sup statistic converges to the
// Brownian bridge sup, so p = 1 - F(a).
SinglePointTest asymptotic_single_point_test(double a_value, double alpha);

struct SigmaPair {
  double sigma_t_sq = 0.0;    // G(1-G) / f(h)^2, per-subject scale
  double sigma_1t_sq = 0.0;   // sigma_t_sq * (N_x + N_y) / (N_x * N_y)
};

// Plug-in scale of the link estimate at a point with CDF value g and
// response density f_at_h at the link value. Throws std::domain_error for
// g outside (0, 1) or f_at_h <= 0.
SigmaPair theoretical_sigma(double g, double f_at_h, std::size_t n_x,
                            std::size_t n_y);

// n * (N_x + N_y) / (N_x * N_y); the limit theory needs this to vanish.
double assumption4_ratio(std::size_t n, std::size_t n_x, std::size_t n_y);

// Ratio above this flags a warning in test diagnostics.
inline constexpr double kAssumption4WarnThreshold = 0.1;

}  // namespace linkcusum
