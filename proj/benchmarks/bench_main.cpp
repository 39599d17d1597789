#include <benchmark/benchmark.h>

#include <cmath>

#include "qdnuc/analysis/fit.hpp"
#include "qdnuc/cooling/oracle.hpp"
#include "qdnuc/cooling/scans.hpp"
#include "qdnuc/core/config.hpp"
#include "qdnuc/dynamics/hamiltonian.hpp"
#include "qdnuc/dynamics/lindblad.hpp"
#include "qdnuc/thermometry/partition.hpp"

using namespace qdnuc;

static void BM_CoolMap(benchmark::State& state) {
  ModelParams p;
  p.b_field = 5.0;
  const int n = static_cast<int>(state.range(0));
  const auto rabi = SweepAxis{"", 1.0, 40.0, n}.values();
  const auto gamma = SweepAxis{"", 1.0, 37.0, n}.values();
  for (auto _ : state) benchmark::DoNotOptimize(cooling::performance_map(p, 0.0, rabi, gamma));
  state.SetItemsProcessed(state.iterations() * n * n);
}
BENCHMARK(BM_CoolMap)->Arg(10)->Arg(40)->Unit(benchmark::kMillisecond);

static void BM_Oracle(benchmark::State& state) {
  ModelParams p;
  p.b_field = 5.0;
  const auto m = cooling::CoolingModel::from_linewidth(p, 15.0, 19.46, 0.0);
  for (auto _ : state) benchmark::DoNotOptimize(cooling::stochastic_steady_state(m));
}
BENCHMARK(BM_Oracle)->Unit(benchmark::kMillisecond);

static void BM_Trajectory(benchmark::State& state) {
  ModelParams p;
  p.t2_us = 1.5;
  const MagnonParams m;
  const auto h = dynamics::build_hamiltonian(0.0, {3.3, 0.0, -21.66}, p, m);
  const auto rho0 = dynamics::DensityMatrix::pure(dynamics::Electron::up, 0);
  for (auto _ : state) {
    const dynamics::LindbladEvolver ev(h, m.gamma_n, p.t2());
    benchmark::DoNotOptimize(ev.trajectory(rho0, 0.01, 101));
  }
}
BENCHMARK(BM_Trajectory)->Unit(benchmark::kMillisecond);

static void BM_LogPartition(benchmark::State& state) {
  const long n = state.range(0);
  for (auto _ : state) benchmark::DoNotOptimize(thermometry::log_partition(5.5, n));
}
BENCHMARK(BM_LogPartition)->Arg(1000)->Arg(30000)->Arg(1000000);

static void BM_InvertVariance(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(thermometry::invert_variance(100.0, 30000));
}
BENCHMARK(BM_InvertVariance)->Unit(benchmark::kMillisecond);

static void BM_FivePeakFit(benchmark::State& state) {
  std::vector<double> x, y;
  for (int i = 0; i <= 140; ++i) {
    x.push_back(-70.0 + i);
    double s = 0.0;
    for (int k = -2; k <= 2; ++k) s += 0.3 * std::exp(-std::pow(x.back() - 21.66 * k, 2) / (2 * 64.0));
    y.push_back(s);
  }
  const auto guess = analysis::default_peak_guesses(x, y, 5, 21.66, 8.0);
  for (auto _ : state) benchmark::DoNotOptimize(analysis::fit_gaussian_sum(x, y, guess));
}
BENCHMARK(BM_FivePeakFit)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
