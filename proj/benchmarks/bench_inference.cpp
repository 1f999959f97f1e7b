#include <benchmark/benchmark.h>

#include "gwsurr/config.hpp"
#include "gwsurr/surrogate.hpp"

using namespace gwsurr;

namespace {

// One small trained regressor shared across the timing runs; the training is
// short because only the forward pass is measured here.
const RegressorModel& model() {
  static const RegressorModel m = [] {
    const NewtonianChirpModel chirp(default_coalescence_time());
    const auto train = build_training_set(chirp, equispaced_q(1.0, 2.0, 200), default_grid());
    const auto eim = build_eim(greedy_build(train, 1e-10));
    const auto ds = build_dataset(train, eim);
    TrainConfig cfg;
    cfg.epochs = 20;
    cfg.batch_size = 16;
    cfg.seed = 1;
    return train_regressor(ds, CoefficientDataset{}, NetworkSpec::parse("S-32-64", 1, ds.stacked_dim()),
                           cfg, 1.0, 2.0);
  }();
  return m;
}

}  // namespace

static void BM_PredictCoefficients(benchmark::State& state) {
  const auto n = state.range(0);
  Eigen::VectorXd q(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    q[i] = 1.0 + (n == 1 ? 0.0 : static_cast<double>(i) / (n - 1));
  }
  const auto& m = model();
  for (auto _ : state) {
    benchmark::DoNotOptimize(m.predict(q));
  }
  state.SetItemsProcessed(state.iterations() * n);
}
BENCHMARK(BM_PredictCoefficients)->RangeMultiplier(8)->Range(1, 1 << 15);

static void BM_SplinePredict(benchmark::State& state) {
  const NewtonianChirpModel chirp(default_coalescence_time());
  const auto train = build_training_set(chirp, equispaced_q(1.0, 2.0, 500), default_grid());
  const auto eim = build_eim(greedy_build(train, 1e-10));
  const auto spline = fit_spline_baseline(build_dataset(train, eim));
  const auto n = state.range(0);
  Eigen::VectorXd q(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    q[i] = 1.0 + (n == 1 ? 0.0 : static_cast<double>(i) / (n - 1));
  }
  for (auto _ : state) {
    benchmark::DoNotOptimize(spline.predict(q));
  }
  state.SetItemsProcessed(state.iterations() * n);
}
BENCHMARK(BM_SplinePredict)->Arg(1024)->Arg(1 << 14);
