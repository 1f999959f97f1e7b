#include <benchmark/benchmark.h>

#include "gwsurr/waveform.hpp"

using namespace gwsurr;

static void BM_GenerateWaveform(benchmark::State& state) {
  const NewtonianChirpModel model(default_coalescence_time());
  const TimeGrid grid(0.0, 4990.0, static_cast<int>(state.range(0)));
  double q = 1.0;
  for (auto _ : state) {
    q = q >= 2.0 ? 1.0 : q + 1e-3;
    benchmark::DoNotOptimize(model.generate(q, grid));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_GenerateWaveform)->Arg(1024)->Arg(4096)->Arg(16384);

static void BM_InnerProduct(benchmark::State& state) {
  const NewtonianChirpModel model(default_coalescence_time());
  const TimeGrid grid(0.0, 4990.0, static_cast<int>(state.range(0)));
  const auto h1 = model.generate(1.1, grid);
  const auto h2 = model.generate(1.7, grid);
  for (auto _ : state) {
    benchmark::DoNotOptimize(inner_product(h1, h2));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_InnerProduct)->Arg(4096)->Arg(65536);

static void BM_Mismatch(benchmark::State& state) {
  const NewtonianChirpModel model(default_coalescence_time());
  const auto grid = default_grid();
  const auto h1 = model.generate(1.1, grid);
  const auto h2 = model.generate(1.7, grid);
  for (auto _ : state) {
    benchmark::DoNotOptimize(mismatch(h1, h2));
  }
}
BENCHMARK(BM_Mismatch);
