#include "fracmem/analytics.hpp"
#include "fracmem/fraccalc.hpp"
#include "fracmem/optimizer.hpp"

#include <benchmark/benchmark.h>

#include <cmath>

using namespace fracmem;

namespace {

DeviceParams device(double alpha, double beta = 1.0) {
  DeviceParams p;
  p.alpha = FractionalOrder(alpha);
  p.beta = beta;
  return p;
}

void BM_RlIntegralOnGrid(benchmark::State& state) {
  const double step = 1.0 / static_cast<double>(state.range(0));
  const auto f = SampledSignal::uniform([](double t) { return std::cos(3.0 * t); }, 1.0, step);
  for (auto _ : state) benchmark::DoNotOptimize(rl_integral_on_grid(f, 0.6));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_RlIntegralOnGrid)->RangeMultiplier(2)->Range(1 << 9, 1 << 13)->Complexity(benchmark::oNSquared);

void BM_TwoPulseQ(benchmark::State& state) {
  const auto p = device(0.7);
  const SwitchingTask task{};
  double t_s = 0.1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(two_pulse_q(p, task, 0.5, t_s));
    t_s = t_s > 0.9 ? 0.1 : t_s + 1e-3;
  }
}
BENCHMARK(BM_TwoPulseQ);

void BM_OptimizeDouble(benchmark::State& state) {
  const auto p = device(static_cast<double>(state.range(0)) / 100.0);
  const SwitchingTask task{};
  OptimizerConfig cfg;
  cfg.min_pulse_width = 1e-6;
  for (auto _ : state) benchmark::DoNotOptimize(optimize_double(p, task, cfg));
}
BENCHMARK(BM_OptimizeDouble)->Arg(30)->Arg(70)->Arg(95)->Unit(benchmark::kMillisecond);

} // namespace

BENCHMARK_MAIN();
