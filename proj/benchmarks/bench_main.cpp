#include <benchmark/benchmark.h>

#include <random>

#include "linkcusum/asymptotics.hpp"
#include "linkcusum/bootstrap.hpp"
#include "linkcusum/cusum.hpp"
#include "linkcusum/estimator.hpp"
#include "linkcusum/panel.hpp"
#include "linkcusum/simulation.hpp"

namespace {

linkcusum::PanelPair make_pair(std::size_t n_subjects, std::size_t n_times) {
  linkcusum::ScenarioConfig scenario;
  scenario.subjects = n_subjects;
  scenario.times = n_times;
  std::mt19937_64 rng(1234);
  return linkcusum::make_scenario_pair(scenario, rng);
}

void BM_estimate_links(benchmark::State& state) {
  const auto pair = make_pair(static_cast<std::size_t>(state.range(0)),
                              static_cast<std::size_t>(state.range(1)));
  const auto grid = linkcusum::default_grid(pair, 25);
  for (auto _ : state) {
    benchmark::DoNotOptimize(linkcusum::estimate_links(pair, grid));
  }
}
BENCHMARK(BM_estimate_links)->Args({50, 20})->Args({100, 100});

void BM_s_m_statistic(benchmark::State& state) {
  const auto pair = make_pair(50, static_cast<std::size_t>(state.range(0)));
  const auto grid = linkcusum::default_grid(pair, 25);
  const auto est = linkcusum::estimate_links(pair, grid);
  for (auto _ : state) {
    benchmark::DoNotOptimize(linkcusum::s_m_statistic(est, grid));
  }
}
BENCHMARK(BM_s_m_statistic)->Arg(20)->Arg(200);

void BM_resample_pair(benchmark::State& state) {
  const auto pair = make_pair(static_cast<std::size_t>(state.range(0)), 20);
  std::mt19937_64 rng(99);
  for (auto _ : state) {
    benchmark::DoNotOptimize(linkcusum::resample_pair(pair, rng));
  }
}
BENCHMARK(BM_resample_pair)->Arg(50)->Arg(500);

void BM_run_test(benchmark::State& state) {
  const auto pair = make_pair(50, 20);
  const auto grid = linkcusum::default_grid(pair, 25);
  linkcusum::BootstrapConfig config;
  config.replications = static_cast<std::size_t>(state.range(0));
  config.seed = 7;
  for (auto _ : state) {
    benchmark::DoNotOptimize(linkcusum::run_test(pair, grid, config));
  }
}
BENCHMARK(BM_run_test)->Arg(50)->Arg(200)->Unit(benchmark::kMillisecond);

void BM_kolmogorov_cdf(benchmark::State& state) {
  double z = 0.3;
  for (auto _ : state) {
    benchmark::DoNotOptimize(linkcusum::kolmogorov_cdf(z));
    z = z < 3.0 ? z + 1e-4 : 0.3;
  }
}
BENCHMARK(BM_kolmogorov_cdf);

void BM_gen_ar1(benchmark::State& state) {
  std::mt19937_64 rng(5);
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        linkcusum::gen_ar1(100, 100, 0.5, rng, "y"));
  }
}
BENCHMARK(BM_gen_ar1);

}  // namespace

BENCHMARK_MAIN();
