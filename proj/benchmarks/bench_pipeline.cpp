#include <benchmark/benchmark.h>

#include "streaklite/baseline.hpp"
#include "streaklite/classifier.hpp"
#include "streaklite/dataset.hpp"
#include "streaklite/detector.hpp"
#include "streaklite/experiments.hpp"
#include "streaklite/features.hpp"
#include "streaklite/growth.hpp"
#include "streaklite/streak.hpp"

using namespace streaklite;

namespace {

const LinearModel& model() {
  static const LinearModel m = [] {
    DatasetConfig cfg;
    cfg.keep_samples = false;
    return train(generate_dataset_rows(20000, cfg, 7).rows, {});
  }();
  return m;
}

Frame noise_frame(int side) { return gaussian_background(side, side, {30.0, 8.0, 1}); }

void BM_RenderStreak(benchmark::State& state) {
  StreakParams s;
  s.center = {64.0, 64.0};
  s.length = static_cast<double>(state.range(0));
  s.angle_deg = 33.0;
  s.intensity = 800.0;
  for (auto _ : state) benchmark::DoNotOptimize(streak_signal(128, 128, s));
}
BENCHMARK(BM_RenderStreak)->Arg(10)->Arg(22);

void BM_FeatureField(benchmark::State& state) {
  const Frame f = noise_frame(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(FeatureField(f));
  state.SetItemsProcessed(state.iterations() * state.range(0) * state.range(0));
}
BENCHMARK(BM_FeatureField)->Arg(256)->Arg(1024);

void BM_ClassifyFrame(benchmark::State& state) {
  const Frame f = noise_frame(static_cast<int>(state.range(0)));
  const LinearModel& m = model();  // trained once, outside the timed loop
  for (auto _ : state) benchmark::DoNotOptimize(classify_frame(f, m));
  state.SetItemsProcessed(state.iterations() * state.range(0) * state.range(0));
}
BENCHMARK(BM_ClassifyFrame)->Arg(256)->Arg(1024);

void BM_ConnectedComponents(benchmark::State& state) {
  const Frame f = noise_frame(512);
  BinaryMap m(512, 512);
  for (int y = 0; y < 512; ++y)
    for (int x = 0; x < 512; ++x) m.set(x, y, f.at(x, y) > 38.0);
  for (auto _ : state) benchmark::DoNotOptimize(connected_components(m));
}
BENCHMARK(BM_ConnectedComponents);

void BM_Refine(benchmark::State& state) {
  TrialSpec spec;
  spec.psnr = 3.0;
  const LabeledSample s = make_trial(spec, 5);
  const auto crude = crude_classify(s.frame, model());
  const BackgroundStats bck = background_stats(s.frame);
  for (auto _ : state) benchmark::DoNotOptimize(refine(s.frame, crude, bck));
}
BENCHMARK(BM_Refine);

void BM_BaselineResponse(benchmark::State& state) {
  const Frame f = noise_frame(256);
  const DirectionalBank bank = build_bank(kDefaultKernelSize, static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(suppressed_response(f, bank));
}
BENCHMARK(BM_BaselineResponse)->Arg(5)->Arg(15);

}  // namespace

BENCHMARK_MAIN();
