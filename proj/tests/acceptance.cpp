// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fail.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "nanoseg/cli.hpp"
#include "nanoseg/io.hpp"
#include "nanoseg/netpbm.hpp"
#include "nanoseg/parallel.hpp"
#include "nanoseg/pipeline.hpp"
#include "nanoseg/synth.hpp"
#include "oracles.hpp"
#include "support.hpp"

#ifndef NANOSEG_PRESET_DIR
#error "NANOSEG_PRESET_DIR must point at the preset configs"
#endif

using namespace nanoseg;
using namespace nanoseg::testing;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

template <typename... Args>
std::string fmt(const char* f, Args... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

PipelineConfig literal_config() {
  PipelineConfig cfg;
  cfg.smoothing = {SmoothingMethod::None, 3};
  cfg.equalize = false;
  cfg.area_policy = {0, 0.0};
  return cfg;
}

PipelineConfig preset(const char* name) {
  return io::load_config(fs::path(NANOSEG_PRESET_DIR) / name);
}

SceneSpec bench_scene(Exposure e, std::uint64_t seed) {
  SceneSpec s;
  s.width = s.height = 512;
  s.particle_count = 50;
  s.radius_min = 32;
  s.radius_max = 40;
  s.gap = 2;
  s.noise_sigma = 8;
  s.exposure = e;
  s.seed = seed;
  return s;
}

Outcome morphology_oracle() {
  std::mt19937 rng(101);
  int mismatches = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const BinaryMask m = random_mask(12, 12, rng, 0.2 + 0.6 * (trial % 7) / 6.0);
    for (StructuringElement se : {StructuringElement{3, 3}, StructuringElement{5, 3}}) {
      const BinaryMask e = oracle_erode(m, se);
      const BinaryMask d = oracle_dilate(m, se);
      mismatches += erode(m, se) != e;
      mismatches += dilate(m, se) != d;
      mismatches += open_op(m, se) != oracle_dilate(e, se);
      mismatches += close_op(m, se) != oracle_erode(d, se);
    }
  }
  return {mismatches == 0, fmt("8000 comparisons, %d mismatches", mismatches)};
}

Outcome adaptive_oracle() {
  std::mt19937 rng(102);
  int mismatches = 0;
  int cases = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const GrayImage img = random_image(32, 32, rng);
    for (int block : {3, 5, 11, 21}) {
      for (int d : {-7, 0, 2, 15}) {
        for (Weighting w : {Weighting::Mean, Weighting::Gaussian}) {
          const AdaptiveParams p{block, d, w};
          mismatches += adaptive_threshold(img, p) != oracle_adaptive(img, p);
          ++cases;
        }
      }
    }
  }
  return {mismatches == 0, fmt("%d image/parameter cases, %d mismatches", cases, mismatches)};
}

Outcome algebraic_properties() {
  std::mt19937 rng(103);
  int failures = 0;
  int checks = 0;
  auto check = [&](bool ok) {
    ++checks;
    failures += !ok;
  };
  for (int trial = 0; trial < 300; ++trial) {
    const StructuringElement se = trial % 2 ? StructuringElement{3, 3} : StructuringElement{5, 3};
    const BinaryMask a = random_mask(20, 17, rng, 0.3 + 0.4 * (trial % 3) / 2.0);
    const BinaryMask b = random_mask(20, 17, rng);
    const BinaryMask c = random_mask(20, 17, rng);

    const BinaryMask o = open_op(a, se);
    check(is_subset(o, a));
    check(open_op(o, se) == o);

    const BinaryMask interior = random_interior_mask(20, 17, se.width / 2 + 1, rng, 0.5);
    const BinaryMask cl = close_op(interior, se);
    check(is_subset(interior, cl));
    check(close_op(cl, se) == cl);

    const GrayImage img = random_image(20, 17, rng);
    const int t = std::uniform_int_distribution<int>(0, 254)(rng);
    check(is_subset(binary_threshold(img, t + 1), binary_threshold(img, t)));
    const AdaptiveParams p{trial % 2 ? 5 : 7, std::uniform_int_distribution<int>(-10, 10)(rng),
                           trial % 3 ? Weighting::Mean : Weighting::Gaussian};
    AdaptiveParams q = p;
    q.offset_d += 1 + trial % 5;
    check(is_subset(adaptive_threshold(img, p), adaptive_threshold(img, q)));

    check(bitwise_and(a, b) == bitwise_and(b, a));
    check(bitwise_or(a, b) == bitwise_or(b, a));
    check(bitwise_and(a, bitwise_and(b, c)) == bitwise_and(bitwise_and(a, b), c));
    check(bitwise_or(a, bitwise_or(b, c)) == bitwise_or(bitwise_or(a, b), c));
    check(bitwise_and(a, bitwise_or(a, b)) == a);
    check(bitwise_or(a, bitwise_and(a, b)) == a);
    check(bitwise_and(a, bitwise_or(b, c)) == bitwise_or(bitwise_and(a, b), bitwise_and(a, c)));
    check(bitwise_and(a, a) == a && bitwise_or(a, a) == a);
  }
  return {failures == 0, fmt("%d checks, %d failed", checks, failures)};
}

GrayImage two_blocks(int gap) {
  GrayImage img(16 + gap, 11, 10);
  for (int y = 3; y < 8; ++y) {
    for (int x = 3; x < 8; ++x) {
      img(x, y) = 200;
      img(x + 5 + gap, y) = 200;
    }
  }
  return img;
}

Outcome non_merging() {
  PipelineConfig cfg = literal_config();
  cfg.binary_t = 100;
  cfg.adaptive = {3, 2, Weighting::Mean};
  const AnalysisReport conv = conventional_analyze(two_blocks(1), cfg);
  const int conv_components = component_count(conv.mask);

  const BinaryMask pm1 = superposition_mask(preprocess_step(two_blocks(1), cfg), cfg);
  const BinaryMask pm2 = superposition_mask(preprocess_step(two_blocks(2), cfg), cfg);
  const int dac1 = component_count(divide_and_conquer(pm1, cfg).merged);
  const int dac2 = component_count(divide_and_conquer(pm2, cfg).merged);
  return {conv_components == 1 && conv.count == 1 && dac1 == 2 && dac2 == 2,
          fmt("conventional 1-px gap: %d component(s); divide-and-conquer: %d (1-px), %d (2-px)",
              conv_components, dac1, dac2)};
}

Outcome crack_repair() {
  std::mt19937 rng(105);
  std::int64_t hole_pixels = 0;
  int particles = 0;
  for (int trial = 0; trial < 50; ++trial) {
    BinaryMask pm(96, 96);
    std::vector<Rect> boxes;
    // A 4x4 grid of cells, one particle per cell, so particles never touch.
    for (int cell = 0; cell < 16; ++cell) {
      const int w = std::uniform_int_distribution<int>(7, 18)(rng);
      const int h = std::uniform_int_distribution<int>(7, 18)(rng);
      const int x0 = 2 + (cell % 4) * 24 + std::uniform_int_distribution<int>(0, 20 - w)(rng);
      const int y0 = 2 + (cell / 4) * 24 + std::uniform_int_distribution<int>(0, 20 - h)(rng);
      for (int y = y0; y < y0 + h; ++y) {
        for (int x = x0; x < x0 + w; ++x) pm.set(x, y);
      }
      const int hw = std::uniform_int_distribution<int>(1, 3)(rng);
      const int hh = std::uniform_int_distribution<int>(1, 3)(rng);
      const int hx = std::uniform_int_distribution<int>(x0 + 2, x0 + w - 2 - hw)(rng);
      const int hy = std::uniform_int_distribution<int>(y0 + 2, y0 + h - 2 - hh)(rng);
      for (int y = hy; y < hy + hh; ++y) {
        for (int x = hx; x < hx + hw; ++x) pm.set(x, y, false);
      }
      boxes.push_back({{x0, y0}, w, h});
    }
    const DivideAndConquerResult r = divide_and_conquer(pm, literal_config());
    for (const Rect& b : boxes) {
      ++particles;
      for (int y = b.origin.y; y < b.origin.y + b.height; ++y) {
        for (int x = b.origin.x; x < b.origin.x + b.width; ++x) hole_pixels += !r.merged.test(x, y);
      }
    }
  }
  return {hole_pixels == 0,
          fmt("%d particles with holes up to 3x3, %lld unfilled pixels", particles,
              static_cast<long long>(hole_pixels))};
}

Outcome permutation_invariance() {
  SceneSpec spec;
  spec.width = spec.height = 512;
  spec.particle_count = 64;
  spec.radius_min = 28;
  spec.radius_max = 35;
  spec.noise_sigma = 8;
  spec.seed = 106;
  const Scene scene = generate(spec);
  const PipelineConfig cfg = preset("regime_a.json");
  const BinaryMask pm = superposition_mask(preprocess_step(scene.image, cfg), cfg);
  std::vector<Contour> sc0 = filter_min_area(find_outer_contours(pm), cfg.area_policy);
  const BinaryMask base = divide_and_conquer(pm, cfg).merged;
  const auto base_bytes = encode_pgm(base);
  std::mt19937 rng(106);
  int differing = 0;
  for (int i = 0; i < 10; ++i) {
    std::shuffle(sc0.begin(), sc0.end(), rng);
    const BinaryMask merged =
        superpose_closed_particles(sc0, pm.width(), pm.height(), cfg.close_se, cfg.close_iters);
    differing += encode_pgm(merged) != base_bytes;
  }
  const std::size_t found = find_outer_contours(base).size();
  return {differing == 0 && sc0.size() >= 60,
          fmt("%zu contours in S_c0, %zu particles, %d of 10 orderings differ", sc0.size(), found,
              differing)};
}

struct RegimeRun {
  Exposure exposure;
  const char* preset;
};

const RegimeRun kRegimes[] = {{Exposure::Even, "regime_a.json"},
                              {Exposure::Cross, "regime_b.json"},
                              {Exposure::Satellite, "regime_c.json"},
                              {Exposure::Polarized, "regime_d.json"}};

struct SeedResult {
  Metrics sup;
  Metrics conv;
};

// Shared by criteria 7 and 8; each scene is analysed once by both methods.
std::vector<std::vector<SeedResult>>& benchmark_runs(double* seconds = nullptr) {
  static std::vector<std::vector<SeedResult>> runs;
  static double elapsed = 0.0;
  if (runs.empty()) {
    const auto t0 = std::chrono::steady_clock::now();
    for (const RegimeRun& r : kRegimes) {
      const PipelineConfig cfg = preset(r.preset);
      std::vector<SeedResult> seeds;
      for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        const Scene s = generate(bench_scene(r.exposure, seed));
        seeds.push_back({evaluate(analyze(s.image, cfg), s.truth),
                         evaluate(conventional_analyze(s.image, cfg), s.truth)});
      }
      runs.push_back(std::move(seeds));
    }
    elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  }
  if (seconds) *seconds = elapsed;
  return runs;
}

Outcome synthetic_benchmark() {
  double seconds = 0.0;
  const auto& runs = benchmark_runs(&seconds);
  Outcome out;
  std::ostringstream detail;
  for (std::size_t i = 0; i < runs.size(); ++i) {
    double ce = 0;
    double rec = 0;
    double iou = 0;
    for (const SeedResult& s : runs[i]) {
      ce += s.sup.count_error / 5;
      rec += s.sup.recall / 5;
      iou += s.sup.mean_iou / 5;
    }
    const bool ok = ce <= 0.10 && rec >= 0.90 && iou >= 0.70;
    out.pass = out.pass && ok;
    detail << to_string(kRegimes[i].exposure) << fmt(" ce=%.3f rec=%.3f iou=%.3f%s; ", ce, rec, iou,
                                                     ok ? "" : " (miss)");
  }
  out.pass = out.pass && seconds < 30.0;
  detail << fmt("%.2f s", seconds);
  out.detail = detail.str();
  return out;
}

Outcome comparative_claim() {
  const auto& runs = benchmark_runs();
  Outcome out;
  std::ostringstream detail;
  for (std::size_t i : {std::size_t{1}, std::size_t{3}}) {
    int wins = 0;
    for (const SeedResult& s : runs[i]) wins += s.sup.count_error < s.conv.count_error;
    out.pass = out.pass && wins >= 4;
    detail << to_string(kRegimes[i].exposure) << fmt(" superposition better on %d/5 seeds; ", wins);
  }
  double worst = 0.0;
  for (const SeedResult& s : runs[0]) {
    const double a = static_cast<double>(s.sup.detected);
    const double b = static_cast<double>(s.conv.detected);
    worst = std::max(worst, std::abs(a - b) / std::max(1.0, std::max(a, b)));
  }
  out.pass = out.pass && worst <= 0.05;
  detail << fmt("even worst per-seed count difference %.1f%%", 100.0 * worst);
  out.detail = detail.str();
  return out;
}

bool same_report(const AnalysisReport& a, const AnalysisReport& b) {
  if (a.mask != b.mask || a.count != b.count || a.particles.size() != b.particles.size()) return false;
  for (std::size_t i = 0; i < a.contours.size(); ++i) {
    if (a.contours[i].points != b.contours[i].points) return false;
  }
  return io::report_to_json(a) == io::report_to_json(b);
}

Outcome end_to_end_performance() {
  SceneSpec spec = bench_scene(Exposure::Even, 109);
  spec.width = spec.height = 1024;
  spec.particle_count = 200;
  const Scene s = generate(spec);
  const PipelineConfig cfg{};
  AnalysisReport single;
  double seconds = 0.0;
  {
    parallel::ScopedThreads one(1);
    const auto t0 = std::chrono::steady_clock::now();
    single = analyze(s.image, cfg);
    seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  }
  const int workers = std::max(4, parallel::max_threads());
  AnalysisReport multi;
  {
    parallel::ScopedThreads many(workers);
    multi = analyze(s.image, cfg);
  }
  const bool identical = same_report(single, multi);
  return {seconds < 2.0 && identical,
          fmt("1024x1024 in %.3f s on 1 worker; %s with %d workers", seconds,
              identical ? "identical" : "DIFFERENT", workers)};
}

Outcome cli_reproducibility() {
  const fs::path root = fs::temp_directory_path() / fmt("nanoseg_acceptance_%d", static_cast<int>(std::random_device{}() % 100000));
  fs::create_directories(root);
  const Scene s = generate(bench_scene(Exposure::Cross, 110));
  write_file(root / "scene.pgm", encode_pgm(s.image));
  const std::string cfg = (fs::path(NANOSEG_PRESET_DIR) / "regime_b.json").string();
  const std::string input = (root / "scene.pgm").string();
  std::vector<std::vector<std::uint8_t>> first;
  int differing = 0;
  int status = 0;
  const char* artifacts[] = {"scene.overlay.ppm", "scene.particles.csv", "scene.report.json",
                             "scene.mask.pgm"};
  for (const char* run : {"run1", "run2"}) {
    const std::string out = (root / run).string();
    const char* argv[] = {"nanoseg", "analyze", input.c_str(), "--config", cfg.c_str(),
                          "--emit", "overlay,csv,json,mask", "--out", out.c_str()};
    std::ostringstream o;
    std::ostringstream e;
    status |= cli::run(9, argv, o, e);
    for (std::size_t k = 0; k < std::size(artifacts); ++k) {
      const fs::path p = root / run / artifacts[k];
      const auto bytes = fs::exists(p) ? read_file(p) : std::vector<std::uint8_t>{};
      if (first.size() < std::size(artifacts)) {
        first.push_back(bytes);
      } else {
        differing += bytes.empty() || bytes != first[k];
      }
    }
  }
  fs::remove_all(root);
  return {status == 0 && differing == 0,
          fmt("exit status %d, %d of 4 artifacts differ between runs", status, differing)};
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria{
      {1, "morphology oracle equivalence", morphology_oracle},
      {2, "adaptive threshold oracle equivalence", adaptive_oracle},
      {3, "algebraic property suite", algebraic_properties},
      {4, "non-merging guarantee", non_merging},
      {5, "crack repair", crack_repair},
      {6, "permutation invariance", permutation_invariance},
      {7, "synthetic benchmark", synthetic_benchmark},
      {8, "comparative claim", comparative_claim},
      {9, "end-to-end performance", end_to_end_performance},
      {10, "CLI reproducibility", cli_reproducibility},
  };
  const double limits[] = {5.0, 5.0, 1e9, 1.0, 1.0, 1e9, 1e9, 1e9, 1e9, 1e9};
  int failed = 0;
  for (const Criterion& c : criteria) {
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (secs >= limits[c.id - 1]) {
      o.pass = false;
      o.detail += fmt(" (over %.0f s limit)", limits[c.id - 1]);
    }
    failed += !o.pass;
    std::printf("%s %2d %s [%.3f s]: %s\n", o.pass ? "PASS" : "FAIL", c.id, c.name, secs, o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
