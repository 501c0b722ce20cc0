#include <charconv>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "linkcusum/asymptotics.hpp"
#include "linkcusum/bootstrap.hpp"
#include "linkcusum/cusum.hpp"
#include "linkcusum/estimator.hpp"
#include "linkcusum/panel.hpp"
#include "linkcusum/rng.hpp"
#include "linkcusum/simulation.hpp"

namespace {

constexpr int kExitRetain = 0;
constexpr int kExitReject = 1;
constexpr int kExitError = 2;

std::string format_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

// "-" (or empty) means stdout.
void write_output(const std::string& path, const std::string& content) {
  if (path.empty() || path == "-") {
    std::cout << content;
    std::cout.flush();
    return;
  }
  std::ofstream out(path);
  if (!out) {
    throw std::runtime_error("cannot open " + path + " for writing");
  }
  out << content;
  if (!out) {
    throw std::runtime_error("write failed for " + path);
  }
}

struct InputArgs {
  std::string input;
  std::string y_input;
  std::string format = "auto";
  bool paired = false;
};

void add_input_options(CLI::App* cmd, InputArgs& args) {
  cmd->add_option("input", args.input,
                  "Long CSV with both panels, or the x panel in wide format")
      ->required();
  cmd->add_option("y_input", args.y_input, "Wide CSV with the y panel");
  cmd->add_option("--format", args.format,
                  "Input layout: long, wide, or auto (default auto: wide "
                  "when two files are given)")
      ->check(CLI::IsMember({"auto", "long", "wide"}));
  cmd->add_flag("--paired", args.paired,
                "Treat panels as paired samples of the same subjects");
}

linkcusum::PanelPair load_input(const InputArgs& args) {
  std::string format = args.format;
  if (format == "auto") {
    format = args.y_input.empty() ? "long" : "wide";
  }
  const linkcusum::Pairing pairing = args.paired
                                         ? linkcusum::Pairing::paired
                                         : linkcusum::Pairing::independent;
  if (format == "long") {
    if (!args.y_input.empty()) {
      throw std::runtime_error("long format takes a single input file");
    }
    return linkcusum::load_panels_long(args.input, pairing);
  }
  if (args.y_input.empty()) {
    throw std::runtime_error("wide format needs two input files (x then y)");
  }
  return linkcusum::load_panels_wide(args.input, args.y_input, pairing);
}

linkcusum::EvaluationGrid make_grid(const linkcusum::PanelPair& pair,
                                    std::size_t grid_m,
                                    const std::vector<double>& grid_points) {
  if (!grid_points.empty()) {
    return linkcusum::grid_from_points(grid_points);
  }
  return linkcusum::default_grid(pair, grid_m);
}

int run(int argc, char** argv) {
  CLI::App app{"Monotone link stability test for two observation panels"};
  app.require_subcommand(1);

  // test
  InputArgs test_input;
  double test_alpha = 0.05;
  std::size_t test_boot = 200;
  std::size_t test_grid_m = 25;
  std::vector<double> test_grid_points;
  std::optional<std::uint64_t> test_seed;
  std::string test_out = "-";
  std::string test_boot_out;
  CLI::App* test_cmd = app.add_subcommand(
      "test", "Run the drift test and write a JSON report");
  add_input_options(test_cmd, test_input);
  test_cmd->add_option("--alpha", test_alpha, "Test level (default 0.05)")
      ->check(CLI::Range(1e-9, 1.0 - 1e-9));
  test_cmd->add_option("--bootstrap", test_boot,
                       "Bootstrap replications (default 200)")
      ->check(CLI::PositiveNumber);
  test_cmd->add_option("--grid", test_grid_m,
                       "Evaluation points on the pooled y quantiles "
                       "(default 25)")
      ->check(CLI::PositiveNumber);
  test_cmd->add_option("--grid-points", test_grid_points,
                       "Explicit evaluation points (overrides --grid)")
      ->delimiter(',');
  test_cmd->add_option("--seed", test_seed,
                       "RNG seed (default: drawn from system entropy)");
  test_cmd->add_option("--out", test_out,
                       "Report destination, - for stdout (default)");
  test_cmd->add_option("--boot-out", test_boot_out,
                       "Optional CSV of bootstrap statistics");

  // simulate
  std::vector<std::string> sim_models = {"iid_gaussian"};
  std::vector<std::string> sim_alts = {"null"};
  std::vector<std::size_t> sim_subjects = {50};
  std::vector<std::size_t> sim_times = {20};
  double sim_rho = 0.5;
  std::size_t sim_reps = 500;
  std::size_t sim_boot = 200;
  double sim_alpha = 0.05;
  std::size_t sim_grid_m = 25;
  double sim_a4_rate = 0.01;
  double sim_a5_rate = 0.05;
  bool sim_smooth_squared = false;
  std::optional<std::uint64_t> sim_seed;
  std::string sim_out = "-";
  CLI::App* sim_cmd = app.add_subcommand(
      "simulate", "Monte Carlo rejection rates over a scenario grid");
  sim_cmd->add_option("--model", sim_models,
                      "Models: iid_gaussian, ar1, paired_gaussian")
      ->delimiter(',');
  sim_cmd->add_option("--alt", sim_alts,
                      "Link profiles: null, a1, a2, a3, a4, a5")
      ->delimiter(',');
  sim_cmd->add_option("--N", sim_subjects, "Subjects per panel (default 50)")
      ->delimiter(',');
  sim_cmd->add_option("--n", sim_times, "Time points (default 20)")
      ->delimiter(',');
  sim_cmd->add_option("--rho", sim_rho, "AR(1) coefficient (default 0.5)");
  sim_cmd->add_option("--reps", sim_reps,
                      "Monte Carlo replications per scenario (default 500)")
      ->check(CLI::PositiveNumber);
  sim_cmd->add_option("--bootstrap", sim_boot,
                      "Bootstrap replications (default 200)")
      ->check(CLI::PositiveNumber);
  sim_cmd->add_option("--alpha", sim_alpha, "Test level (default 0.05)")
      ->check(CLI::Range(1e-9, 1.0 - 1e-9));
  sim_cmd->add_option("--grid", sim_grid_m,
                      "Evaluation points (default 25)")
      ->check(CLI::PositiveNumber);
  sim_cmd->add_option("--a4-rate", sim_a4_rate,
                      "Rate of the a4 profile (default 0.01)");
  sim_cmd->add_option("--a5-rate", sim_a5_rate,
                      "Rate of the a5 profile (default 0.05)");
  sim_cmd->add_flag("--smooth-squared", sim_smooth_squared,
                    "Use u = (t-1)^2 in the a4/a5 profiles");
  sim_cmd->add_option("--seed", sim_seed,
                      "Master seed (default: drawn from system entropy)");
  sim_cmd->add_option("--out", sim_out,
                      "CSV destination, - for stdout (default)");

  // critvals
  std::vector<double> crit_levels = {0.90, 0.95, 0.99};
  std::string crit_out = "-";
  CLI::App* crit_cmd = app.add_subcommand(
      "critvals", "Large-sample critical values of the per-point statistic");
  crit_cmd->add_option("--levels", crit_levels,
                       "Probability levels (default 0.90,0.95,0.99)")
      ->delimiter(',');
  crit_cmd->add_option("--out", crit_out,
                       "CSV destination, - for stdout (default)");

  // hplot
  InputArgs hplot_input;
  std::size_t hplot_grid_m = 25;
  std::vector<double> hplot_grid_points;
  std::string hplot_out = "-";
  CLI::App* hplot_cmd = app.add_subcommand(
      "hplot", "Tabulate the estimated link per time point for plotting");
  add_input_options(hplot_cmd, hplot_input);
  hplot_cmd->add_option("--grid", hplot_grid_m,
                        "Evaluation points (default 25)")
      ->check(CLI::PositiveNumber);
  hplot_cmd->add_option("--grid-points", hplot_grid_points,
                        "Explicit evaluation points (overrides --grid)")
      ->delimiter(',');
  hplot_cmd->add_option("--out", hplot_out,
                        "CSV destination, - for stdout (default)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    // Help and version requests exit 0; anything else is a usage error.
    const int code = app.exit(e);
    return code == 0 ? kExitRetain : kExitError;
  }

  if (app.got_subcommand(test_cmd)) {
    const linkcusum::PanelPair pair = load_input(test_input);
    const linkcusum::EvaluationGrid grid =
        make_grid(pair, test_grid_m, test_grid_points);
    linkcusum::BootstrapConfig config;
    config.replications = test_boot;
    config.alpha = test_alpha;
    config.seed = test_seed ? *test_seed : linkcusum::entropy_seed();
    const linkcusum::TestReport report =
        linkcusum::run_test(pair, grid, config);
    if (report.diagnostics.assumption4_warning) {
      std::cerr << "warning: n * (N_x + N_y) / (N_x * N_y) = "
                << format_double(report.diagnostics.assumption4_ratio)
                << " exceeds " << format_double(
                       linkcusum::kAssumption4WarnThreshold)
                << "; the large-sample approximation may be poor\n";
    }
    write_output(test_out, linkcusum::report_to_json(report));
    if (!test_boot_out.empty()) {
      write_output(test_boot_out,
                   linkcusum::boot_stats_csv(report.boot_stats));
    }
    return report.reject ? kExitReject : kExitRetain;
  }

  if (app.got_subcommand(sim_cmd)) {
    const std::uint64_t seed =
        sim_seed ? *sim_seed : linkcusum::entropy_seed();
    std::string csv = linkcusum::power_csv_header();
    for (const std::string& model_name : sim_models) {
      for (const std::string& alt_name : sim_alts) {
        for (std::size_t subjects : sim_subjects) {
          for (std::size_t times : sim_times) {
            linkcusum::ScenarioConfig scenario;
            scenario.model = linkcusum::parse_model(model_name);
            scenario.alternative = linkcusum::parse_alternative(alt_name);
            scenario.subjects = subjects;
            scenario.times = times;
            scenario.rho = sim_rho;
            scenario.rates.a4_rate = sim_a4_rate;
            scenario.rates.a5_rate = sim_a5_rate;
            scenario.rates.smooth_squared = sim_smooth_squared;
            scenario.replications = sim_reps;
            scenario.bootstrap.replications = sim_boot;
            scenario.bootstrap.alpha = sim_alpha;
            scenario.grid_points = sim_grid_m;
            const linkcusum::PowerResult result =
                linkcusum::power_study(scenario, seed);
            csv += linkcusum::power_csv_row(result);
          }
        }
      }
    }
    write_output(sim_out, csv);
    return kExitRetain;
  }

  if (app.got_subcommand(crit_cmd)) {
    std::string csv = "p,z\n";
    for (double p : crit_levels) {
      csv += format_double(p);
      csv += ',';
      csv += format_double(linkcusum::kolmogorov_quantile(p));
      csv += '\n';
    }
    write_output(crit_out, csv);
    return kExitRetain;
  }

  if (app.got_subcommand(hplot_cmd)) {
    const linkcusum::PanelPair pair = load_input(hplot_input);
    const linkcusum::EvaluationGrid grid =
        make_grid(pair, hplot_grid_m, hplot_grid_points);
    const linkcusum::LinkEstimate est = linkcusum::estimate_links(pair, grid);
    std::string csv = "t,x,h_hat\n";
    for (std::size_t t = 0; t < est.n_times; ++t) {
      for (std::size_t j = 0; j < est.n_points; ++j) {
        csv += std::to_string(t + 1);
        csv += ',';
        csv += format_double(grid.points[j]);
        csv += ',';
        csv += format_double(est.at(t, j));
        csv += '\n';
      }
    }
    write_output(hplot_out, csv);
    return kExitRetain;
  }

  return kExitError;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitError;
  }
}
