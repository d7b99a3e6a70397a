// OpenMP kernels against their serial reference versions on a 1024x1024 scene.
// Thread count for the parallel side follows NANOSEG_THREADS or the OpenMP default.
#include <benchmark/benchmark.h>

#include "nanoseg/morphology.hpp"
#include "nanoseg/parallel.hpp"
#include "nanoseg/pipeline.hpp"
#include "nanoseg/preprocess.hpp"
#include "nanoseg/synth.hpp"
#include "nanoseg/threshold.hpp"

using namespace nanoseg;

namespace {

struct Fixture {
  GrayImage image;
  GrayImage pre;
  BinaryMask pm;
  std::vector<Contour> contours;
};

const Fixture& fixture() {
  static const Fixture f = [] {
    SceneSpec spec;
    spec.width = spec.height = 1024;
    spec.particle_count = 200;
    spec.radius_min = 32;
    spec.radius_max = 40;
    spec.noise_sigma = 8;
    spec.exposure = Exposure::Cross;
    Fixture out;
    out.image = generate(spec).image;
    PipelineConfig cfg;
    cfg.adaptive = {31, 30, Weighting::Mean};
    out.pre = preprocess_step(out.image, cfg);
    out.pm = superposition_mask(out.pre, cfg);
    out.contours = find_outer_contours(out.pm);
    return out;
  }();
  return f;
}

void set_pixels(benchmark::State& state) {
  state.SetItemsProcessed(state.iterations() * fixture().image.width() * fixture().image.height());
}

void BM_SmoothGaussian5(benchmark::State& state) {
  const SmoothingKind k{SmoothingMethod::Gaussian, 5};
  for (auto _ : state) benchmark::DoNotOptimize(smooth(fixture().image, k));
  set_pixels(state);
}

void BM_SmoothGaussian5Reference(benchmark::State& state) {
  const SmoothingKind k{SmoothingMethod::Gaussian, 5};
  for (auto _ : state) benchmark::DoNotOptimize(reference::smooth(fixture().image, k));
  set_pixels(state);
}

void BM_SmoothMedian3(benchmark::State& state) {
  const SmoothingKind k{SmoothingMethod::Median, 3};
  for (auto _ : state) benchmark::DoNotOptimize(smooth(fixture().image, k));
  set_pixels(state);
}

void BM_SmoothMedian3Reference(benchmark::State& state) {
  const SmoothingKind k{SmoothingMethod::Median, 3};
  for (auto _ : state) benchmark::DoNotOptimize(reference::smooth(fixture().image, k));
  set_pixels(state);
}

void BM_Adaptive(benchmark::State& state) {
  const AdaptiveParams p{static_cast<int>(state.range(0)), 2, Weighting::Mean};
  for (auto _ : state) benchmark::DoNotOptimize(adaptive_threshold(fixture().pre, p));
  set_pixels(state);
}

void BM_AdaptiveReference(benchmark::State& state) {
  const AdaptiveParams p{static_cast<int>(state.range(0)), 2, Weighting::Mean};
  for (auto _ : state) benchmark::DoNotOptimize(reference::adaptive_threshold(fixture().pre, p));
  set_pixels(state);
}

void BM_Open(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(open_op(fixture().pm, {3, 3}, 2));
  set_pixels(state);
}

void BM_OpenReference(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(reference::open_op(fixture().pm, {3, 3}, 2));
  set_pixels(state);
}

void BM_Superpose(benchmark::State& state) {
  const Fixture& f = fixture();
  for (auto _ : state) {
    benchmark::DoNotOptimize(superpose_closed_particles(f.contours, f.pm.width(), f.pm.height(), {3, 3}, 1));
  }
  state.counters["particles"] = static_cast<double>(f.contours.size());
}

void BM_SuperposeReference(benchmark::State& state) {
  const Fixture& f = fixture();
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        reference::superpose_closed_particles(f.contours, f.pm.width(), f.pm.height(), {3, 3}, 1));
  }
  state.counters["particles"] = static_cast<double>(f.contours.size());
}

void BM_Analyze(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(analyze(fixture().image, PipelineConfig{}));
  set_pixels(state);
}

}  // namespace

BENCHMARK(BM_SmoothGaussian5)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SmoothGaussian5Reference)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SmoothMedian3)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SmoothMedian3Reference)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Adaptive)->Arg(11)->Arg(61)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_AdaptiveReference)->Arg(11)->Arg(61)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Open)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_OpenReference)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Superpose)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SuperposeReference)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Analyze)->Unit(benchmark::kMillisecond);

int main(int argc, char** argv) {
  parallel::set_threads(parallel::threads_from_env(parallel::max_threads()));
  fixture();  // keep scene generation out of the first timing
  benchmark::Initialize(&argc, argv);
  if (benchmark::ReportUnrecognizedArguments(argc, argv)) return 1;
  benchmark::RunSpecifiedBenchmarks();
  benchmark::Shutdown();
  return 0;
}
