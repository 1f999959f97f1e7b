#include <benchmark/benchmark.h>

#include "gwsurr/config.hpp"
#include "gwsurr/eim.hpp"

using namespace gwsurr;

namespace {

const WaveformSet& training_set(int n) {
  static const NewtonianChirpModel model(default_coalescence_time());
  static WaveformSet cache;
  if (cache.size() != n) {
    cache = build_training_set(model, equispaced_q(1.0, 2.0, n), default_grid());
  }
  return cache;
}

}  // namespace

static void BM_GreedyBuild(benchmark::State& state) {
  const auto& train = training_set(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(greedy_build(train, 1e-10));
  }
}
BENCHMARK(BM_GreedyBuild)->Arg(100)->Arg(400)->Unit(benchmark::kMillisecond);

static void BM_BuildEim(benchmark::State& state) {
  const auto basis = greedy_build(training_set(200), 1e-10);
  for (auto _ : state) {
    benchmark::DoNotOptimize(build_eim(basis));
  }
}
BENCHMARK(BM_BuildEim)->Unit(benchmark::kMicrosecond);

static void BM_EimReconstruct(benchmark::State& state) {
  const auto& train = training_set(200);
  const auto eim = build_eim(greedy_build(train, 1e-10));
  const auto a = eim_coefficients(train.row(42), eim);
  for (auto _ : state) {
    benchmark::DoNotOptimize(eim_reconstruct(a, eim));
  }
}
BENCHMARK(BM_EimReconstruct)->Unit(benchmark::kMicrosecond);

static void BM_ProjectionErrors(benchmark::State& state) {
  const auto& train = training_set(400);
  const auto basis = greedy_build(train, 1e-10);
  for (auto _ : state) {
    benchmark::DoNotOptimize(projection_errors(train, basis));
  }
  state.SetItemsProcessed(state.iterations() * train.size());
}
BENCHMARK(BM_ProjectionErrors)->Unit(benchmark::kMillisecond);
