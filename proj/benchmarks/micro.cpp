#include <benchmark/benchmark.h>

#include <random>

#include "peak/confseq.hpp"
#include "peak/distributions.hpp"
#include "peak/harness.hpp"
#include "peak/regions.hpp"

namespace {

peak::StreamState bern_stream(std::size_t n, double p, std::uint64_t seed) {
  peak::Rng rng(seed);
  std::bernoulli_distribution d(p);
  peak::StreamState s;
  for (std::size_t i = 0; i < n; ++i) s.observe(d(rng) ? 1.0 : 0.0);
  return s;
}

peak::JointState bern_joint(std::size_t per_arm, std::uint64_t seed) {
  const auto arms = peak::preset_arms("paper-bern");
  peak::Rng rng(seed);
  peak::JointState joint(arms.size(), {});
  for (std::size_t i = 0; i < per_arm; ++i) {
    for (std::size_t a = 0; a < arms.size(); ++a) joint.observe(a, peak::sample(arms[a], rng));
  }
  return joint;
}

void BM_LogCapital(benchmark::State& state) {
  const auto s = bern_stream(static_cast<std::size_t>(state.range(0)), 0.4, 3);
  const peak::StreamConfig cfg;
  double m = 0.3;
  for (auto _ : state) {
    benchmark::DoNotOptimize(peak::log_capital(s, cfg, m));
    m = m < 0.7 ? m + 1e-4 : 0.3;
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_LogCapital)->RangeMultiplier(4)->Range(64, 4096)->Complexity(benchmark::oN);

void BM_Minimizer(benchmark::State& state) {
  const auto s = bern_stream(static_cast<std::size_t>(state.range(0)), 0.4, 5);
  const peak::StreamConfig cfg;
  for (auto _ : state) benchmark::DoNotOptimize(peak::minimizer(s, cfg));
}
BENCHMARK(BM_Minimizer)->RangeMultiplier(4)->Range(64, 4096);

void BM_MinimizeBai(benchmark::State& state) {
  const auto joint = bern_joint(static_cast<std::size_t>(state.range(0)), 7);
  const auto gm = peak::global_minimum(joint);
  for (auto _ : state) {
    for (std::size_t a = 0; a < joint.arms(); ++a) {
      benchmark::DoNotOptimize(peak::minimize_bai(joint, a, gm));
    }
  }
}
BENCHMARK(BM_MinimizeBai)->RangeMultiplier(4)->Range(64, 1024);

void BM_PeakIntervalStream(benchmark::State& state) {
  const auto full = bern_stream(static_cast<std::size_t>(state.range(0)), 0.5, 11);
  for (auto _ : state) benchmark::DoNotOptimize(peak::peak_interval(full, {}, 0.05));
}
BENCHMARK(BM_PeakIntervalStream)->Arg(500)->Arg(2000);

void BM_HedgedGridStream(benchmark::State& state) {
  const auto full = bern_stream(500, 0.5, 11);
  for (auto _ : state) {
    peak::HedgedGrid grid(static_cast<std::size_t>(state.range(0)), 0.05);
    for (const auto& r : full.records()) benchmark::DoNotOptimize(grid.update(r.x));
  }
}
BENCHMARK(BM_HedgedGridStream)->Arg(100)->Arg(400);

// Fixed-horizon BAI protocol, one path per iteration.
void BM_BenchProtocol(benchmark::State& state) {
  peak::BenchConfig cfg;
  cfg.arms = peak::preset_arms("paper-bern");
  cfg.horizon = 1000;
  cfg.n_paths = 1;
  cfg.methods = {state.range(0) == 0 ? peak::parse_method("peak")
                                     : peak::parse_method("hedged:" + std::to_string(state.range(0)))};
  for (auto _ : state) benchmark::DoNotOptimize(peak::bench_runtime(cfg));
}
BENCHMARK(BM_BenchProtocol)->Arg(0)->Arg(100)->Arg(400)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
