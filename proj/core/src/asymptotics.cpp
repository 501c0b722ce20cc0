#include "linkcusum/asymptotics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace linkcusum {

double kolmogorov_cdf(double z, int truncation, double tolerance) {
  if (z <= 0.0) {
    return 0.0;
  }
  const double pi = std::acos(-1.0);
  if (z < 1.0) {
    // Theta-dual form: fast-converging and free of the cancellation that
    // makes 1 + 2 * sum collapse to rounding noise in the left tail.
    double sum = 0.0;
    for (int k = 1; k <= truncation; ++k) {
      const double odd = 2.0 * static_cast<double>(k) - 1.0;
      const double term = std::exp(-odd * odd * pi * pi / (8.0 * z * z));
      sum += term;
      if (term < tolerance) {
        break;
      }
    }
    return std::clamp(std::sqrt(2.0 * pi) / z * sum, 0.0, 1.0);
  }
  double sum = 0.0;
  for (int k = 1; k <= truncation; ++k) {
    const double term =
        std::exp(-2.0 * static_cast<double>(k) * static_cast<double>(k) * z *
                 z);
    sum += (k % 2 == 1) ? -term : term;
    if (term < tolerance) {
      break;
    }
  }
  return std::clamp(1.0 + 2.0 * sum, 0.0, 1.0);
}

double kolmogorov_quantile(double p, int truncation, double tolerance) {
  if (!(p > 0.0 && p < 1.0)) {
    throw std::invalid_argument("kolmogorov_quantile: p must be in (0, 1)");
  }
  double lo = 1e-6;
  double hi = 10.0;
  while (hi - lo > 1e-12) {
    const double mid = 0.5 * (lo + hi);
    if (kolmogorov_cdf(mid, truncation, tolerance) < p) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

SinglePointTest asymptotic_single_point_test(double a_value, double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw std::invalid_argument(
        "asymptotic_single_point_test: alpha must be in (0, 1)");
  }
  SinglePointTest result;
  result.p_value = 1.0 - kolmogorov_cdf(a_value);
  result.reject = result.p_value < alpha;
  return result;
}

SigmaPair theoretical_sigma(double g, double f_at_h, std::size_t n_x,
                            std::size_t n_y) {
  if (!(g > 0.0 && g < 1.0)) {
    throw std::domain_error("theoretical_sigma: G must be in (0, 1)");
  }
  if (!(f_at_h > 0.0)) {
    throw std::domain_error("theoretical_sigma: density must be positive");
  }
  if (n_x == 0 || n_y == 0) {
    throw std::domain_error("theoretical_sigma: subject counts must be positive");
  }
  SigmaPair s;
  s.sigma_t_sq = g * (1.0 - g) / (f_at_h * f_at_h);
  s.sigma_1t_sq = s.sigma_t_sq * (static_cast<double>(n_x + n_y)) /
                  (static_cast<double>(n_x) * static_cast<double>(n_y));
  return s;
}

double assumption4_ratio(std::size_t n, std::size_t n_x, std::size_t n_y) {
  if (n_x == 0 || n_y == 0) {
    throw std::domain_error("assumption4_ratio: subject counts must be positive");
  }
  return static_cast<double>(n) * static_cast<double>(n_x + n_y) /
         (static_cast<double>(n_x) * static_cast<double>(n_y));
}

}  // namespace linkcusum
