#include "linkcusum/simulation.hpp"

#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "linkcusum/parallel.hpp"
#include "linkcusum/rng.hpp"

namespace linkcusum {

namespace {

std::string format_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

}  // namespace

Model parse_model(const std::string& name) {
  if (name == "iid_gaussian") return Model::iid_gaussian;
  if (name == "ar1") return Model::ar1;
  if (name == "paired_gaussian") return Model::paired_gaussian;
  throw std::invalid_argument("unknown model \"" + name + "\"");
}

Alternative parse_alternative(const std::string& name) {
  if (name == "null") return Alternative::null;
  if (name == "a1") return Alternative::a1;
  if (name == "a2") return Alternative::a2;
  if (name == "a3") return Alternative::a3;
  if (name == "a4") return Alternative::a4;
  if (name == "a5") return Alternative::a5;
  throw std::invalid_argument("unknown alternative \"" + name + "\"");
}

std::string to_string(Model model) {
  switch (model) {
    case Model::iid_gaussian:
      return "iid_gaussian";
    case Model::ar1:
      return "ar1";
    case Model::paired_gaussian:
      return "paired_gaussian";
  }
  throw std::invalid_argument("unknown model value");
}

std::string to_string(Alternative alternative) {
  switch (alternative) {
    case Alternative::null:
      return "null";
    case Alternative::a1:
      return "a1";
    case Alternative::a2:
      return "a2";
    case Alternative::a3:
      return "a3";
    case Alternative::a4:
      return "a4";
    case Alternative::a5:
      return "a5";
  }
  throw std::invalid_argument("unknown alternative value");
}

double apply_alternative(Alternative alternative, std::size_t t,
                         std::size_t n, double v,
                         const AlternativeRates& rates) {
  if (t < 1 || t > n) {
    throw std::invalid_argument("apply_alternative: t out of range");
  }
  const double td = static_cast<double>(t);
  switch (alternative) {
    case Alternative::null:
      return v;
    case Alternative::a1:
      return 2.0 * td * td / (1.0 + td * td) + v;
    case Alternative::a2:
      return (2.0 * td * td / (1.0 + td * td)) * v;
    case Alternative::a3: {
      const double dn = static_cast<double>(n);
      return td < dn / 2.0 ? v + 0.05 * td : v + 0.005 * (dn - td);
    }
    case Alternative::a4:
    case Alternative::a5: {
      const double r = alternative == Alternative::a4 ? rates.a4_rate
                                                      : rates.a5_rate;
      double u = td - 1.0;
      if (rates.smooth_squared) {
        u *= u;
      }
      return v + 1.0 / (1.0 + std::exp(-r * u));
    }
  }
  throw std::invalid_argument("unknown alternative value");
}

Panel gen_iid_gaussian(std::size_t n_subjects, std::size_t n_times,
                       std::mt19937_64& rng, const std::string& name) {
  Panel panel;
  panel.name = name;
  panel.n_times = n_times;
  panel.values.reserve(n_subjects * n_times);
  std::normal_distribution<double> normal(0.0, 1.0);
  for (std::size_t s = 0; s < n_subjects; ++s) {
    panel.subject_ids.push_back("s" + std::to_string(s + 1));
    for (std::size_t t = 0; t < n_times; ++t) {
      panel.values.push_back(normal(rng));
    }
  }
  return panel;
}

Panel gen_ar1(std::size_t n_subjects, std::size_t n_times, double rho,
              std::mt19937_64& rng, const std::string& name) {
  if (!(std::abs(rho) < 1.0)) {
    throw std::invalid_argument("gen_ar1: |rho| must be < 1");
  }
  Panel panel;
  panel.name = name;
  panel.n_times = n_times;
  panel.values.reserve(n_subjects * n_times);
  std::normal_distribution<double> normal(0.0, 1.0);
  const double start_sd = 1.0 / std::sqrt(1.0 - rho * rho);
  for (std::size_t s = 0; s < n_subjects; ++s) {
    panel.subject_ids.push_back("s" + std::to_string(s + 1));
    double prev = start_sd * normal(rng);
    panel.values.push_back(prev);
    for (std::size_t t = 1; t < n_times; ++t) {
      prev = rho * prev + normal(rng);
      panel.values.push_back(prev);
    }
  }
  return panel;
}

PanelPair make_scenario_pair(const ScenarioConfig& scenario,
                             std::mt19937_64& rng) {
  const std::size_t n_subjects = scenario.subjects;
  const std::size_t n_times = scenario.times;

  const auto gen = [&](const std::string& name) {
    return scenario.model == Model::ar1
               ? gen_ar1(n_subjects, n_times, scenario.rho, rng, name)
               : gen_iid_gaussian(n_subjects, n_times, rng, name);
  };

  PanelPair pair;
  pair.y = gen("y");
  if (scenario.model == Model::paired_gaussian) {
    pair.pairing = Pairing::paired;
    pair.x = pair.y;
    pair.x.name = "x";
  } else {
    pair.pairing = Pairing::independent;
    pair.x = gen("x");
  }
  for (std::size_t s = 0; s < n_subjects; ++s) {
    for (std::size_t t = 0; t < n_times; ++t) {
      pair.x.cell(s, t) = apply_alternative(
          scenario.alternative, t + 1, n_times, pair.x.cell(s, t),
          scenario.rates);
    }
  }
  return pair;
}

PowerResult power_study(const ScenarioConfig& scenario, std::uint64_t seed) {
  if (scenario.replications == 0) {
    throw std::invalid_argument("power_study: need at least one replication");
  }
  const auto start = std::chrono::steady_clock::now();

  std::vector<char> rejected(scenario.replications, 0);
  parallel_for(scenario.replications, [&](std::size_t r) {
    const std::uint64_t root = derive_seed(seed, r);
    std::mt19937_64 data_rng = make_stream(root, 0);
    const PanelPair pair = make_scenario_pair(scenario, data_rng);
    const EvaluationGrid grid = default_grid(pair, scenario.grid_points);
    BootstrapConfig boot = scenario.bootstrap;
    boot.seed = derive_seed(root, 1);
    const TestReport report = run_test(pair, grid, boot);
    rejected[r] = report.reject ? 1 : 0;
  });

  PowerResult result;
  result.scenario = scenario;
  result.seed = seed;
  for (char c : rejected) {
    result.rejections += static_cast<std::size_t>(c);
  }
  const double big_r = static_cast<double>(scenario.replications);
  result.power = static_cast<double>(result.rejections) / big_r;
  result.mc_stderr = std::sqrt(result.power * (1.0 - result.power) / big_r);
  result.runtime_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  return result;
}

std::string power_csv_header() {
  return "model,alternative,N,n,B,alpha,replications,power,stderr,seed\n";
}

std::string power_csv_row(const PowerResult& result) {
  const ScenarioConfig& s = result.scenario;
  std::string row;
  row += to_string(s.model);
  row += ',';
  row += to_string(s.alternative);
  row += ',';
  row += std::to_string(s.subjects);
  row += ',';
  row += std::to_string(s.times);
  row += ',';
  row += std::to_string(s.bootstrap.replications);
  row += ',';
  row += format_double(s.bootstrap.alpha);
  row += ',';
  row += std::to_string(s.replications);
  row += ',';
  row += format_double(result.power);
  row += ',';
  row += format_double(result.mc_stderr);
  row += ',';
  row += std::to_string(result.seed);
  row += '\n';
  return row;
}

}  // namespace linkcusum
