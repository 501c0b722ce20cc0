// Acceptance gate: one line per criterion, nonzero exit if any fail.
// Heavier Monte Carlo settings live here, not in the unit tests.

#include <algorithm>
#include <cmath>
#include <cstdarg>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "linkcusum/asymptotics.hpp"
#include "linkcusum/bootstrap.hpp"
#include "linkcusum/cusum.hpp"
#include "linkcusum/estimator.hpp"
#include "linkcusum/panel.hpp"
#include "linkcusum/parallel.hpp"
#include "linkcusum/rng.hpp"
#include "linkcusum/simulation.hpp"
#include "testutil.hpp"

namespace {

int g_failures = 0;

void report(int id, const char* name, bool pass, const std::string& detail) {
  std::printf("[%s] criterion %d: %s (%s)\n", pass ? "PASS" : "FAIL", id,
              name, detail.c_str());
  std::fflush(stdout);
  if (!pass) {
    ++g_failures;
  }
}

std::string fmt(const char* f, ...) {
  char buf[512];
  va_list args;
  va_start(args, f);
  std::vsnprintf(buf, sizeof(buf), f, args);
  va_end(args);
  return std::string(buf);
}

// 1. The limit-law CDF reproduces the classical quantile table.
void criterion_limit_quantiles() {
  const double pairs[3][2] = {
      {1.2238, 0.90}, {1.3581, 0.95}, {1.6276, 0.99}};
  bool pass = true;
  double worst = 0.0;
  for (const auto& pq : pairs) {
    const double err = std::abs(linkcusum::kolmogorov_cdf(pq[0]) - pq[1]);
    worst = std::max(worst, err);
    pass = pass && err <= 1e-3;
  }
  report(1, "limit law quantile table", pass,
         fmt("max |F(z) - p| = %.2e, tolerance 1e-3", worst));
}

// 2. The single-point estimator has the predicted large-sample scale:
// with standard normal panels of size N each and the identity link,
// sqrt(N/2) * h_hat(0) has variance G(1-G)/f^2 = pi/2.
void criterion_estimator_scale() {
  const std::size_t n_subjects = 2000;
  const std::size_t reps = 2000;
  std::vector<double> scaled(reps);
  linkcusum::parallel_for(reps, [&](std::size_t r) {
    std::mt19937_64 rng = linkcusum::make_stream(2001, r);
    std::normal_distribution<double> normal(0.0, 1.0);
    std::vector<double> x_col(n_subjects);
    std::vector<double> y_col(n_subjects);
    for (double& v : x_col) {
      v = normal(rng);
    }
    for (double& v : y_col) {
      v = normal(rng);
    }
    const double h = linkcusum::link_at(x_col, y_col, 0.0);
    scaled[r] = std::sqrt(static_cast<double>(n_subjects) / 2.0) * h;
  });
  double mean = 0.0;
  for (double v : scaled) {
    mean += v;
  }
  mean /= static_cast<double>(reps);
  double var = 0.0;
  for (double v : scaled) {
    var += (v - mean) * (v - mean);
  }
  var /= static_cast<double>(reps - 1);
  const double target = std::acos(-1.0) / 2.0;
  const double rel = std::abs(var - target) / target;
  report(2, "single-point estimator scale", rel <= 0.15,
         fmt("var = %.4f, target pi/2 = %.4f, rel err %.1f%% (limit 15%%)",
             var, target, rel * 100.0));
}

// 3. The per-point sup statistic follows the bridge sup law under the null.
void criterion_sup_law() {
  const std::size_t n_subjects = 2000;
  const std::size_t n_times = 200;
  const std::size_t reps = 500;
  const linkcusum::EvaluationGrid grid = linkcusum::grid_from_points({0.0});

  std::vector<double> a_stats(reps);
  linkcusum::parallel_for(reps, [&](std::size_t r) {
    std::mt19937_64 rng = linkcusum::make_stream(3001, r);
    linkcusum::PanelPair pair;
    pair.x = linkcusum::gen_iid_gaussian(n_subjects, n_times, rng, "x");
    pair.y = linkcusum::gen_iid_gaussian(n_subjects, n_times, rng, "y");
    const linkcusum::LinkEstimate est = linkcusum::estimate_links(pair, grid);
    a_stats[r] = linkcusum::s_m_statistic(est, grid).a_values[0];
  });

  const double d = testutil::ks_distance(
      a_stats, [](double z) { return linkcusum::kolmogorov_cdf(z); });
  report(3, "sup statistic limit distribution", d < 0.10,
         fmt("KS distance %.4f over %zu draws, limit 0.10", d, reps));
}

// 4. Bootstrap test size under the null stays near the nominal level.
//
// Known red. The trajectory bootstrap resamples the observed panels
// without recentering, so each resampled link column is the observed
// column plus fresh noise of the same scale: conditionally on the data
// the bootstrap statistic behaves like sup|B_obs + B*|/sqrt(2) while the
// observed one is sup|B_obs|. The observed statistic therefore tracks
// the middle of its own bootstrap distribution (measured on null data:
// s_m 0.55-1.09 vs bootstrap q95 0.82-1.19, p-values 0.18-0.94) and the
// size collapses to ~0 at any N and n. A control experiment that centers
// each bootstrap column on the observed one before the statistic puts
// the size at 0.083, inside this band, and lifts the early-drift powers
// checked in criterion 6; the shipped procedure is the plain
// non-recentered one, so this check stays red as documentation.
void criterion_null_size() {
  linkcusum::ScenarioConfig scenario;
  scenario.model = linkcusum::Model::iid_gaussian;
  scenario.alternative = linkcusum::Alternative::null;
  scenario.subjects = 50;
  scenario.times = 20;
  scenario.replications = 500;
  scenario.bootstrap.replications = 200;
  scenario.bootstrap.alpha = 0.05;
  scenario.grid_points = 25;
  const linkcusum::PowerResult r = linkcusum::power_study(scenario, 4001);
  const bool pass = r.power >= 0.02 && r.power <= 0.09;
  report(4, "empirical size under the null", pass,
         fmt("size %.4f at nominal 0.05, accepted band [0.02, 0.09]",
             r.power));
}

linkcusum::PowerResult run_power(linkcusum::Model model,
                                 linkcusum::Alternative alt,
                                 std::size_t n_times, std::size_t reps,
                                 std::uint64_t seed) {
  linkcusum::ScenarioConfig scenario;
  scenario.model = model;
  scenario.alternative = alt;
  scenario.subjects = 50;
  scenario.times = n_times;
  scenario.replications = reps;
  scenario.bootstrap.replications = 200;
  scenario.bootstrap.alpha = 0.05;
  scenario.grid_points = 25;
  return linkcusum::power_study(scenario, seed);
}

double pooled_2se(const linkcusum::PowerResult& a,
                  const linkcusum::PowerResult& b) {
  return 2.0 * std::sqrt(a.mc_stderr * a.mc_stderr +
                         b.mc_stderr * b.mc_stderr);
}

// 5. A slowly accumulating drift is easier to detect on longer panels.
void criterion_power_grows() {
  const auto p20 = run_power(linkcusum::Model::iid_gaussian,
                             linkcusum::Alternative::a3, 20, 300, 5001);
  const auto p100 = run_power(linkcusum::Model::iid_gaussian,
                              linkcusum::Alternative::a3, 100, 300, 5001);
  const double margin = pooled_2se(p20, p100);
  const bool pass = p100.power - p20.power > margin;
  report(5, "slow drift gains power with longer panels", pass,
         fmt("power n=100: %.3f vs n=20: %.3f, needs gap > %.3f",
             p100.power, p20.power, margin));
}

// 6. Drifts that settle early are diluted by longer stable stretches.
//
// Known half-red: the a2 comparison. The conservativeness described at
// criterion 4 floors the multiplicative-drift power at exactly 0 for
// both lengths, so no strict decrease exists; the recentered control
// gives 0.12 (n=20) vs 0.04 (n=200), a real decrease. The a1 half
// passes as is.
void criterion_power_shrinks() {
  bool pass = true;
  std::string detail;
  const linkcusum::Alternative alts[2] = {linkcusum::Alternative::a1,
                                          linkcusum::Alternative::a2};
  const std::uint64_t seeds[2] = {6001, 6002};
  for (int i = 0; i < 2; ++i) {
    const auto p20 = run_power(linkcusum::Model::iid_gaussian, alts[i], 20,
                               300, seeds[i]);
    const auto p200 = run_power(linkcusum::Model::iid_gaussian, alts[i], 200,
                                300, seeds[i]);
    const double margin = pooled_2se(p20, p200);
    const bool ok = p20.power - p200.power > margin;
    pass = pass && ok;
    if (i > 0) {
      detail += "; ";
    }
    detail += fmt("%s n=20: %.3f vs n=200: %.3f (gap > %.3f: %s)",
                  linkcusum::to_string(alts[i]).c_str(), p20.power,
                  p200.power, margin, ok ? "yes" : "no");
  }
  report(6, "early-settling drift loses power with longer panels", pass,
         detail);
}

// 7. Sharing subjects across panels does not hurt detection.
void criterion_paired_power() {
  const auto indep = run_power(linkcusum::Model::iid_gaussian,
                               linkcusum::Alternative::a1, 20, 300, 7001);
  const auto paired = run_power(linkcusum::Model::paired_gaussian,
                                linkcusum::Alternative::a1, 20, 300, 7001);
  const bool pass = paired.power >= indep.power - 0.05;
  report(7, "paired design is no weaker than independent", pass,
         fmt("paired %.3f vs independent %.3f, slack 0.05", paired.power,
             indep.power));
}

// 8. CLI outputs are byte-identical across thread counts and reruns.
void criterion_thread_determinism() {
  testutil::TempDir dir;
  linkcusum::ScenarioConfig scenario;
  scenario.subjects = 20;
  scenario.times = 10;
  std::mt19937_64 rng(8001);
  const linkcusum::PanelPair pair =
      linkcusum::make_scenario_pair(scenario, rng);
  const std::string data = dir.file("data.csv");
  linkcusum::write_panels_long(pair, data);

  const std::string test_args = "test " + data + " --seed 7 --bootstrap 100";
  const auto t1 = testutil::run_cli(test_args, "LINKCUSUM_THREADS=1");
  const auto t4 = testutil::run_cli(test_args, "LINKCUSUM_THREADS=4");
  const bool test_ok = t1.exit_code == t4.exit_code && t1.out == t4.out &&
                       !t1.out.empty();

  const std::string sim_args =
      "simulate --model iid_gaussian,paired_gaussian --alt null,a1 --N 10 "
      "--n 8 --reps 5 --bootstrap 20 --grid 5 --seed 13";
  const auto s1 = testutil::run_cli(sim_args, "LINKCUSUM_THREADS=1");
  const auto s4 = testutil::run_cli(sim_args, "LINKCUSUM_THREADS=4");
  const bool sim_ok = s1.exit_code == 0 && s4.exit_code == 0 &&
                      s1.out == s4.out && !s1.out.empty();

  report(8, "outputs are identical across thread counts", test_ok && sim_ok,
         fmt("test bytes %s, simulate bytes %s",
             test_ok ? "match" : "differ", sim_ok ? "match" : "differ"));
}

// 9. Structural properties of the link estimator on random panels:
// monotone in the evaluation point, values drawn from the response
// column, exact equivariance under monotone maps, identity on equal
// panels.
void criterion_estimator_properties() {
  std::mt19937_64 rng(9001);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_int_distribution<int> lattice(-2, 2);
  std::uniform_int_distribution<std::size_t> n_x_dist(2, 25);
  std::uniform_int_distribution<std::size_t> n_y_dist(2, 25);
  std::uniform_int_distribution<std::size_t> t_dist(2, 12);
  std::uniform_int_distribution<int> flavor(0, 2);

  std::size_t checked = 0;
  std::size_t failed_monotone = 0;
  std::size_t failed_member = 0;
  std::size_t failed_equivariance = 0;
  std::size_t failed_identity = 0;

  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t n_x = n_x_dist(rng);
    const std::size_t n_y = n_y_dist(rng);
    const std::size_t n_times = t_dist(rng);
    const int kind = flavor(rng);
    const auto draw = [&]() -> double {
      if (kind == 0) {
        return normal(rng);
      }
      if (kind == 1) {
        return static_cast<double>(lattice(rng));  // heavy ties
      }
      return std::exp(normal(rng));  // skewed, positive
    };

    linkcusum::PanelPair pair;
    pair.x.name = "x";
    pair.x.n_times = n_times;
    for (std::size_t s = 0; s < n_x; ++s) {
      pair.x.subject_ids.push_back("x" + std::to_string(s + 1));
      for (std::size_t t = 0; t < n_times; ++t) {
        pair.x.values.push_back(draw());
      }
    }
    pair.y.name = "y";
    pair.y.n_times = n_times;
    for (std::size_t s = 0; s < n_y; ++s) {
      pair.y.subject_ids.push_back("y" + std::to_string(s + 1));
      for (std::size_t t = 0; t < n_times; ++t) {
        pair.y.values.push_back(draw());
      }
    }

    const linkcusum::EvaluationGrid grid = linkcusum::default_grid(pair, 7);
    const linkcusum::LinkEstimate est = linkcusum::estimate_links(pair, grid);
    ++checked;

    std::vector<double> x_col;
    for (std::size_t t = 0; t < n_times; ++t) {
      pair.x.column(t, x_col);
      for (std::size_t j = 0; j < est.n_points; ++j) {
        if (j > 0 && est.at(t, j) < est.at(t, j - 1)) {
          ++failed_monotone;
        }
        const double h = est.at(t, j);
        if (std::count(x_col.begin(), x_col.end(), h) == 0) {
          ++failed_member;
        }
      }
    }

    linkcusum::PanelPair cubed = pair;
    for (double& v : cubed.x.values) {
      v = v * v * v;
    }
    const linkcusum::LinkEstimate mapped =
        linkcusum::estimate_links(cubed, grid);
    for (std::size_t t = 0; t < n_times; ++t) {
      for (std::size_t j = 0; j < est.n_points; ++j) {
        const double h = est.at(t, j);
        if (mapped.at(t, j) != h * h * h) {
          ++failed_equivariance;
        }
      }
    }

    std::vector<double> col;
    pair.x.column(0, col);
    for (double v : col) {
      if (linkcusum::link_at(col, col, v) != v) {
        ++failed_identity;
      }
    }
  }

  const bool pass = failed_monotone == 0 && failed_member == 0 &&
                    failed_equivariance == 0 && failed_identity == 0;
  report(9, "estimator properties hold on random panels", pass,
         fmt("%zu cases; violations: monotone %zu, membership %zu, "
             "equivariance %zu, identity %zu",
             checked, failed_monotone, failed_member, failed_equivariance,
             failed_identity));
}

}  // namespace

int main() {
  criterion_limit_quantiles();
  criterion_estimator_scale();
  criterion_sup_law();
  criterion_null_size();
  criterion_power_grows();
  criterion_power_shrinks();
  criterion_paired_power();
  criterion_thread_determinism();
  criterion_estimator_properties();
  std::printf("acceptance: %d of 9 criteria passed\n", 9 - g_failures);
  return g_failures == 0 ? 0 : 1;
}
