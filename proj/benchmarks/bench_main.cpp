#include <benchmark/benchmark.h>

#include <vector>

#include "sqz/cavity.hpp"
#include "sqz/constants.hpp"
#include "sqz/estimation.hpp"
#include "sqz/synth.hpp"

namespace {

sqz::SqueezerParams bench_params() {
  sqz::SqueezerParams p;
  p.efficiency = 0.965;
  p.threshold_power = 0.221;
  p.phase_jitter = sqz::deg_to_rad(0.66);
  p.cavity = {0.10, 0.001, 0.0798};
  return p;
}

sqz::CavityLayout bench_layout() {
  sqz::CavityLayout layout;
  layout.wavelength = 1550e-9;
  layout.elements = {sqz::CurvedMirror{25e-3, 0.90, 1.0}, sqz::Gap{23e-3},
                     sqz::FlatInterface{}, sqz::Slab{9.3e-3, 1.816},
                     sqz::CurvedMirror{12e-3, 1.0, 1.816}};
  return layout;
}

sqz::Dataset bench_dataset() {
  std::vector<double> powers;
  for (int i = 0; i < 12; ++i) powers.push_back(0.006 + 0.174 * i / 11.0);
  sqz::TraceSpec spec;
  spec.n_points = 300;
  spec.rbw = 200e3;
  spec.vbw = 200;
  spec.relative_scatter = 0.0715;
  spec.seed = 42;
  return sqz::synth_pump_sweep(bench_params(), powers, 5e6, spec, 0.03);
}

void BM_ModelPoint(benchmark::State& state) {
  const auto params = bench_params();
  sqz::MeasurementPoint pt;
  pt.pump_power = 0.180;
  pt.sigma_pump = 0.0054;
  pt.frequency = 5e6;
  pt.tag = sqz::QuadratureTag::squeezed;
  pt.value_db = -12.4;
  pt.sigma_db = 0.3;
  for (auto _ : state)
    benchmark::DoNotOptimize(sqz::model_prediction(params, pt));
}
BENCHMARK(BM_ModelPoint);

void BM_ModelGradient(benchmark::State& state) {
  const auto params = bench_params();
  sqz::MeasurementPoint pt;
  pt.pump_power = 0.180;
  pt.sigma_pump = 0.0054;
  pt.frequency = 5e6;
  pt.tag = sqz::QuadratureTag::antisqueezed;
  pt.value_db = 19.8;
  pt.sigma_db = 0.3;
  for (auto _ : state)
    benchmark::DoNotOptimize(sqz::model_gradient(params, pt));
}
BENCHMARK(BM_ModelGradient);

void BM_CavityEigenmode(benchmark::State& state) {
  const auto layout = bench_layout();
  for (auto _ : state) benchmark::DoNotOptimize(sqz::eigenmode(layout));
}
BENCHMARK(BM_CavityEigenmode);

void BM_SynthSweep(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(bench_dataset());
}
BENCHMARK(BM_SynthSweep);

void BM_Fit(benchmark::State& state) {
  const sqz::Dataset d = bench_dataset();
  for (auto _ : state) benchmark::DoNotOptimize(sqz::fit(d));
}
BENCHMARK(BM_Fit);

}  // namespace

BENCHMARK_MAIN();
