#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <string>

#include "linkcusum/bootstrap.hpp"
#include "linkcusum/panel.hpp"

namespace linkcusum {

// Data generating processes for the covariate panel. The response panel is
// the time-t link applied cellwise to an independent copy (independent
// pairing) or to the covariate panel itself (paired).
enum class Model { iid_gaussian, ar1, paired_gaussian };

// Time profiles of the link.
//   null: h_t(v) = v for all t
//   a1:   h_t(v) = 2t^2 / (1 + t^2) + v
//   a2:   h_t(v) = (2t^2 / (1 + t^2)) * v
//   a3:   h_t(v) = v + 0.05 t        for t < n/2
//         h_t(v) = v + 0.005 (n - t) otherwise
//   a4,a5: h_t(v) = v + 1 / (1 + exp(-r u)), u = t - 1,
//          r = a4_rate resp. a5_rate
enum class Alternative { null, a1, a2, a3, a4, a5 };

struct AlternativeRates {
  double a4_rate = 0.01;
  double a5_rate = 0.05;
  // Uses u = (t - 1)^2 in a4/a5 instead of u = t - 1.
  bool smooth_squared = false;
};

struct ScenarioConfig {
  Model model = Model::iid_gaussian;
  Alternative alternative = Alternative::null;
  std::size_t subjects = 50;    // N, per panel
  std::size_t times = 20;       // n
  double rho = 0.5;             // ar1 only
  AlternativeRates rates;
  std::size_t replications = 500;
  BootstrapConfig bootstrap;
  std::size_t grid_points = 25;
};

struct PowerResult {
  ScenarioConfig scenario;
  std::uint64_t seed = 0;  // master seed of the study
  std::size_t rejections = 0;
  double power = 0.0;
  double mc_stderr = 0.0;  // sqrt(p (1 - p) / R)
  double runtime_seconds = 0.0;
};

Model parse_model(const std::string& name);
Alternative parse_alternative(const std::string& name);
std::string to_string(Model model);
std::string to_string(Alternative alternative);

// Link value at time t (1-based) of n for covariate value v.
double apply_alternative(Alternative alternative, std::size_t t,
                         std::size_t n, double v,
                         const AlternativeRates& rates);

// N x n panel of iid standard normals, subject ids s1..sN.
Panel gen_iid_gaussian(std::size_t n_subjects, std::size_t n_times,
                       std::mt19937_64& rng, const std::string& name);

// Stationary AR(1) rows: first value N(0, 1 / (1 - rho^2)), then
// v_t = rho v_{t-1} + e_t with standard normal innovations. Requires
// |rho| < 1.
Panel gen_ar1(std::size_t n_subjects, std::size_t n_times, double rho,
              std::mt19937_64& rng, const std::string& name);

// One synthetic data set: covariate panel y, response panel x with the
// scenario's link applied. Draws the y panel first, then (for independent
// pairing) the copy the response is built from, so the rng stream layout
// is fixed.
PanelPair make_scenario_pair(const ScenarioConfig& scenario,
                             std::mt19937_64& rng);

// Monte Carlo rejection rate over scenario.replications data sets.
// Replication r derives its data and bootstrap seeds from (seed, r), so
// results do not depend on thread count or schedule.
PowerResult power_study(const ScenarioConfig& scenario, std::uint64_t seed);

std::string power_csv_header();
std::string power_csv_row(const PowerResult& result);

}  // namespace linkcusum
