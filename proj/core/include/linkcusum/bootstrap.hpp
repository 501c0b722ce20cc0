#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "linkcusum/cusum.hpp"
#include "linkcusum/panel.hpp"

namespace linkcusum {

struct BootstrapConfig {
  std::size_t replications = 200;
  double alpha = 0.05;
  std::uint64_t seed = 0;
};

struct TestDiagnostics {
  double assumption4_ratio = 0.0;
  bool assumption4_warning = false;
  std::vector<std::size_t> degenerate_grid_points;
  Pairing pairing = Pairing::independent;
  std::size_t n_x = 0;
  std::size_t n_y = 0;
  std::size_t n = 0;
  std::size_t m = 0;
  std::uint64_t seed = 0;
};

struct TestReport {
  double s_m = 0.0;
  std::vector<double> a_values;
  std::vector<double> boot_stats;
  double p_value = 1.0;
  bool reject = false;
  double alpha = 0.05;
  TestDiagnostics diagnostics;
};

// Draws whole-subject trajectories with replacement. Independent pairing
// resamples the x and y rosters separately (N_x then N_y draws from rng,
// in that order); paired pairing draws N shared row indices so each x row
// keeps its y partner. Resampled subjects get positional ids r1..rN.
PanelPair resample_pair(const PanelPair& pair, std::mt19937_64& rng);

// B bootstrap statistics, replication b seeded from (config.seed, b) so
// the vector is independent of thread count and schedule.
std::vector<double> bootstrap_distribution(const PanelPair& pair,
                                           const EvaluationGrid& grid,
                                           const BootstrapConfig& config);

// Full test: observed statistic, bootstrap law, p-value
// (1 + #{boot >= s_m}) / (B + 1), and the rejection decision
// s_m > empirical (1 - alpha) quantile of the bootstrap statistics.
TestReport run_test(const PanelPair& pair, const EvaluationGrid& grid,
                    const BootstrapConfig& config);

// JSON with stable field order; all doubles in shortest round-trip form.
std::string report_to_json(const TestReport& report);

// One "b,stat" row per bootstrap replication.
std::string boot_stats_csv(const std::vector<double>& boot_stats);

}  // namespace linkcusum
