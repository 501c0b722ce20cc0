#include "linkcusum/bootstrap.hpp"

#include <algorithm>
#include <charconv>
#include <stdexcept>

#include "json.hpp"
#include "linkcusum/asymptotics.hpp"
#include "linkcusum/parallel.hpp"
#include "linkcusum/rng.hpp"

namespace linkcusum {

namespace {

Panel resample_panel(const Panel& source, const std::vector<std::size_t>& rows) {
  Panel out;
  out.name = source.name;
  out.n_times = source.n_times;
  out.subject_ids.reserve(rows.size());
  out.values.reserve(rows.size() * source.n_times);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    out.subject_ids.push_back("r" + std::to_string(i + 1));
    const std::size_t s = rows[i];
    out.values.insert(out.values.end(),
                      source.values.begin() + s * source.n_times,
                      source.values.begin() + (s + 1) * source.n_times);
  }
  return out;
}

std::vector<std::size_t> draw_rows(std::size_t count, std::size_t n_subjects,
                                   std::mt19937_64& rng) {
  std::uniform_int_distribution<std::size_t> pick(0, n_subjects - 1);
  std::vector<std::size_t> rows(count);
  for (std::size_t& r : rows) {
    r = pick(rng);
  }
  return rows;
}

std::string format_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

}  // namespace

PanelPair resample_pair(const PanelPair& pair, std::mt19937_64& rng) {
  PanelPair out;
  out.pairing = pair.pairing;
  if (pair.pairing == Pairing::paired) {
    // One shared draw keeps each subject's (x, y) trajectories together.
    const std::vector<std::size_t> rows =
        draw_rows(pair.x.n_subjects(), pair.x.n_subjects(), rng);
    out.x = resample_panel(pair.x, rows);
    out.y = resample_panel(pair.y, rows);
  } else {
    // x rows first, then y rows, so the stream layout is fixed.
    const std::vector<std::size_t> x_rows =
        draw_rows(pair.x.n_subjects(), pair.x.n_subjects(), rng);
    const std::vector<std::size_t> y_rows =
        draw_rows(pair.y.n_subjects(), pair.y.n_subjects(), rng);
    out.x = resample_panel(pair.x, x_rows);
    out.y = resample_panel(pair.y, y_rows);
  }
  return out;
}

std::vector<double> bootstrap_distribution(const PanelPair& pair,
                                           const EvaluationGrid& grid,
                                           const BootstrapConfig& config) {
  if (config.replications == 0) {
    throw std::invalid_argument(
        "bootstrap_distribution: need at least one replication");
  }
  std::vector<double> stats(config.replications);
  parallel_for(config.replications, [&](std::size_t b) {
    std::mt19937_64 rng = make_stream(config.seed, b);
    const PanelPair star = resample_pair(pair, rng);
    const LinkEstimate est = estimate_links(star, grid);
    stats[b] = s_m_statistic(est, grid).s_m;
  });
  return stats;
}

TestReport run_test(const PanelPair& pair, const EvaluationGrid& grid,
                    const BootstrapConfig& config) {
  if (!(config.alpha > 0.0 && config.alpha < 1.0)) {
    throw std::invalid_argument("run_test: alpha must be in (0, 1)");
  }
  validate_pair(pair);
  validate_grid(grid);

  TestReport report;
  report.alpha = config.alpha;

  const LinkEstimate est = estimate_links(pair, grid);
  const CusumResult cusum = s_m_statistic(est, grid);
  report.s_m = cusum.s_m;
  report.a_values = cusum.a_values;

  report.boot_stats = bootstrap_distribution(pair, grid, config);

  std::size_t at_least = 0;
  for (double b : report.boot_stats) {
    if (b >= report.s_m) {
      ++at_least;
    }
  }
  const double big_b = static_cast<double>(report.boot_stats.size());
  report.p_value = (1.0 + static_cast<double>(at_least)) / (big_b + 1.0);

  std::vector<double> sorted(report.boot_stats);
  std::sort(sorted.begin(), sorted.end());
  const double critical = sample_quantile(sorted, 1.0 - config.alpha);
  report.reject = report.s_m > critical;

  TestDiagnostics& d = report.diagnostics;
  d.pairing = pair.pairing;
  d.n_x = pair.x.n_subjects();
  d.n_y = pair.y.n_subjects();
  d.n = pair.x.n_times;
  d.m = grid.size();
  d.seed = config.seed;
  d.assumption4_ratio = assumption4_ratio(d.n, d.n_x, d.n_y);
  d.assumption4_warning = d.assumption4_ratio > kAssumption4WarnThreshold;
  d.degenerate_grid_points = cusum.degenerate_points;
  return report;
}

std::string report_to_json(const TestReport& report) {
  nlohmann::ordered_json j;
  j["s_m"] = report.s_m;
  j["a_values"] = report.a_values;
  j["boot_stats"] = report.boot_stats;
  j["p_value"] = report.p_value;
  j["reject"] = report.reject;
  j["alpha"] = report.alpha;
  nlohmann::ordered_json d;
  d["assumption4_ratio"] = report.diagnostics.assumption4_ratio;
  d["assumption4_warning"] = report.diagnostics.assumption4_warning;
  d["degenerate_grid_points"] = report.diagnostics.degenerate_grid_points;
  d["pairing_mode"] = to_string(report.diagnostics.pairing);
  d["N_x"] = report.diagnostics.n_x;
  d["N_y"] = report.diagnostics.n_y;
  d["n"] = report.diagnostics.n;
  d["M"] = report.diagnostics.m;
  d["seed"] = report.diagnostics.seed;
  j["diagnostics"] = d;
  return j.dump(2) + "\n";
}

std::string boot_stats_csv(const std::vector<double>& boot_stats) {
  std::string out = "b,stat\n";
  for (std::size_t b = 0; b < boot_stats.size(); ++b) {
    out += std::to_string(b + 1);
    out += ',';
    out += format_double(boot_stats[b]);
    out += '\n';
  }
  return out;
}

}  // namespace linkcusum
