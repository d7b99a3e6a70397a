#include "nanoseg/cli.hpp"

#include <algorithm>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "nanoseg/io.hpp"
#include "nanoseg/netpbm.hpp"
#include "nanoseg/parallel.hpp"
#include "nanoseg/pipeline.hpp"
#include "nanoseg/synth.hpp"

namespace nanoseg::cli {

namespace fs = std::filesystem;

namespace {

struct AnalyzeArgs {
  std::vector<std::string> inputs;
  std::string config_path;
  std::string method = "superposition";
  std::string out_dir = ".";
  std::vector<std::string> emit{"overlay", "csv", "json"};
  std::optional<int> binary_t;
  std::optional<int> adaptive_block;
  std::optional<int> adaptive_d;
  std::optional<std::int64_t> min_area;
  std::optional<double> min_area_frac;
};

struct GenerateArgs {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> exposure;
  std::string out_dir = ".";
};

struct EvaluateArgs {
  std::string report_path;
  std::string truth_path;
  std::string out_dir = ".";
};

struct FileOutcome {
  std::string log;
  std::string diagnostics;
};

void write_bytes(const fs::path& p, std::span<const std::uint8_t> bytes) {
  try {
    write_file(p, bytes);
  } catch (const std::exception& e) {
    throw Error("cannot write " + p.string() + ": " + e.what());
  }
}

void write_string(const fs::path& p, const std::string& s) {
  write_bytes(p, std::span(reinterpret_cast<const std::uint8_t*>(s.data()), s.size()));
}

FileOutcome analyze_file(const fs::path& input, const PipelineConfig& cfg,
                         const std::vector<Method>& methods, const std::set<std::string>& emit,
                         const fs::path& out_dir) {
  FileOutcome outcome;
  GrayImage img;
  try {
    img = read_pgm(input);
  } catch (const PgmError& e) {
    outcome.diagnostics = input.string() + ": " + to_string(e.kind()) + " at byte " +
                          std::to_string(e.offset()) + ": " + e.what() + "\n";
    return outcome;
  } catch (const std::exception& e) {
    outcome.diagnostics = input.string() + ": " + e.what() + "\n";
    return outcome;
  }

  const std::string stem = input.stem().string();
  for (Method m : methods) {
    try {
      const AnalysisReport report =
          m == Method::Superposition ? analyze(img, cfg) : conventional_analyze(img, cfg);
      std::string prefix = stem + ".";
      if (methods.size() > 1) prefix += std::string(to_string(m)) + ".";
      if (emit.contains("overlay")) {
        write_bytes(out_dir / (prefix + "overlay.ppm"),
                    encode_ppm(render_overlay(img, report.contours)));
      }
      if (emit.contains("csv")) write_string(out_dir / (prefix + "particles.csv"), io::particles_csv(report));
      if (emit.contains("json")) write_string(out_dir / (prefix + "report.json"), io::report_to_json(report));
      if (emit.contains("mask")) write_bytes(out_dir / (prefix + "mask.pgm"), encode_pgm(report.mask));
      outcome.log += input.string() + ": " + to_string(m) + ": " + std::to_string(report.count) +
                     " particles\n";
    } catch (const std::exception& e) {
      outcome.diagnostics += input.string() + ": " + to_string(m) + ": " + e.what() + "\n";
    }
  }
  return outcome;
}

int cmd_analyze(const AnalyzeArgs& a, std::ostream& out, std::ostream& err) {
  PipelineConfig cfg;
  try {
    if (!a.config_path.empty()) cfg = io::load_config(a.config_path);
    if (a.binary_t) cfg.binary_t = *a.binary_t;
    if (a.adaptive_block) cfg.adaptive.block = *a.adaptive_block;
    if (a.adaptive_d) cfg.adaptive.offset_d = *a.adaptive_d;
    if (a.min_area) cfg.area_policy.absolute_min = *a.min_area;
    if (a.min_area_frac) cfg.area_policy.relative_fraction = *a.min_area_frac;
    cfg.validate();
  } catch (const std::exception& e) {
    err << "invalid config: " << e.what() << "\n";
    return kExitUsage;
  }

  std::vector<Method> methods;
  if (a.method != "conventional") methods.push_back(Method::Superposition);
  if (a.method != "superposition") methods.push_back(Method::Conventional);
  const std::set<std::string> emit(a.emit.begin(), a.emit.end());

  std::map<std::string, std::string> stems;
  for (const std::string& in : a.inputs) {
    const std::string stem = fs::path(in).stem().string();
    if (auto [it, fresh] = stems.emplace(stem, in); !fresh) {
      err << in << ": output stem '" << stem << "' collides with " << it->second << "\n";
      return kExitUsage;
    }
  }

  const fs::path out_dir(a.out_dir);
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec || !fs::is_directory(out_dir)) {
    err << out_dir.string() << ": cannot create output directory\n";
    return kExitFailure;
  }

  const int workers = parallel::max_threads();
  const auto n = static_cast<std::ptrdiff_t>(a.inputs.size());
  std::vector<FileOutcome> outcomes(a.inputs.size());
  if (n > 1 && workers > 1) {
    // One file per worker; kernels inside run on that worker alone.
#pragma omp parallel for num_threads(workers) schedule(dynamic, 1)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
      outcomes[i] = analyze_file(a.inputs[i], cfg, methods, emit, out_dir);
    }
  } else {
    for (std::ptrdiff_t i = 0; i < n; ++i) {
      outcomes[i] = analyze_file(a.inputs[i], cfg, methods, emit, out_dir);
    }
  }

  bool ok = true;
  for (const FileOutcome& o : outcomes) {
    out << o.log;
    err << o.diagnostics;
    ok = ok && o.diagnostics.empty();
  }
  return ok ? kExitOk : kExitFailure;
}

int cmd_generate(const GenerateArgs& a, std::ostream& out, std::ostream& err) {
  SceneSpec spec;
  try {
    if (!a.config_path.empty()) spec = io::scene_from_json(io::read_text(a.config_path));
    if (a.seed) spec.seed = *a.seed;
    if (a.exposure) spec.exposure = exposure_from_string(*a.exposure);
    spec.validate();
    if (spec.particle_count > 255) throw std::invalid_argument("label files hold at most 255 particles");
  } catch (const std::exception& e) {
    err << "invalid scene: " << e.what() << "\n";
    return kExitUsage;
  }

  Scene scene;
  try {
    scene = generate(spec);
  } catch (const GenerationError& e) {
    err << "generation failed after " << e.attempts() << " attempts (" << e.placed() << " of "
        << spec.particle_count << " placed): " << e.what() << "\n";
    return kExitFailure;
  }

  const fs::path dir(a.out_dir);
  try {
    std::error_code ec;
    fs::create_directories(dir, ec);
    write_bytes(dir / "scene.pgm", encode_pgm(scene.image));
    write_bytes(dir / "scene.labels.pgm",
                encode_pgm(scene.truth.label_image(), static_cast<int>(scene.truth.particles.size())));
    write_string(dir / "scene.truth.json", io::truth_to_json(scene.truth));
  } catch (const std::exception& e) {
    err << e.what() << "\n";
    return kExitFailure;
  }
  out << (dir / "scene.pgm").string() << ": " << scene.truth.particles.size() << " particles, "
      << to_string(spec.exposure) << ", seed " << spec.seed << "\n";
  return kExitOk;
}

GroundTruth load_truth(const fs::path& p) {
  const std::vector<std::uint8_t> bytes = read_file(p);
  if (!bytes.empty() && bytes[0] == 'P') return truth_from_labels(decode_pgm(bytes));
  return io::truth_from_json(std::string(bytes.begin(), bytes.end()));
}

int cmd_evaluate(const EvaluateArgs& a, std::ostream& out, std::ostream& err) {
  Metrics m;
  try {
    const AnalysisReport report = io::report_from_json(io::read_text(a.report_path));
    const GroundTruth gt = load_truth(a.truth_path);
    m = evaluate(report, gt);
  } catch (const std::exception& e) {
    err << "evaluate: " << e.what() << "\n";
    return kExitFailure;
  }
  const std::string text = io::metrics_to_json(m);
  try {
    std::error_code ec;
    fs::create_directories(a.out_dir, ec);
    write_string(fs::path(a.out_dir) / "metrics.json", text);
  } catch (const std::exception& e) {
    err << e.what() << "\n";
    return kExitFailure;
  }
  out << text;
  return kExitOk;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  parallel::set_threads(parallel::threads_from_env(parallel::max_threads()));

  CLI::App app{"Particle segmentation for SEM-style micrographs"};
  app.require_subcommand(1);

  AnalyzeArgs aa;
  auto* analyze_cmd = app.add_subcommand("analyze", "Segment PGM images and write artifacts");
  analyze_cmd->add_option("inputs", aa.inputs, "Input PGM files (P2 or P5)")->required();
  analyze_cmd->add_option("--config", aa.config_path, "Pipeline config JSON");
  analyze_cmd->add_option("--method", aa.method, "Segmentation method")
      ->check(CLI::IsMember({"superposition", "conventional", "both"}));
  analyze_cmd->add_option("--out", aa.out_dir, "Output directory");
  analyze_cmd->add_option("--emit", aa.emit, "Artifacts to write")
      ->delimiter(',')
      ->check(CLI::IsMember({"overlay", "csv", "json", "mask"}));
  analyze_cmd->add_option("--binary-t", aa.binary_t, "Global threshold");
  analyze_cmd->add_option("--adaptive-block", aa.adaptive_block, "Adaptive block size");
  analyze_cmd->add_option("--adaptive-d", aa.adaptive_d, "Adaptive offset D");
  analyze_cmd->add_option("--min-area", aa.min_area, "Absolute minimal area");
  analyze_cmd->add_option("--min-area-frac", aa.min_area_frac, "Minimal area relative to the largest");

  GenerateArgs ga;
  auto* generate_cmd = app.add_subcommand("generate", "Write a synthetic scene with ground truth");
  generate_cmd->add_option("--config", ga.config_path, "Scene spec JSON");
  generate_cmd->add_option("--seed", ga.seed, "Random seed");
  generate_cmd->add_option("--exposure", ga.exposure, "even, cross, satellite or polarized");
  generate_cmd->add_option("--out", ga.out_dir, "Output directory");

  EvaluateArgs ea;
  auto* evaluate_cmd = app.add_subcommand("evaluate", "Score a report against ground truth");
  evaluate_cmd->add_option("report", ea.report_path, "report.json from analyze")->required();
  evaluate_cmd->add_option("truth", ea.truth_path, "truth.json or label PGM")->required();
  evaluate_cmd->add_option("--out", ea.out_dir, "Directory for metrics.json");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  if (analyze_cmd->parsed()) return cmd_analyze(aa, out, err);
  if (generate_cmd->parsed()) return cmd_generate(ga, out, err);
  return cmd_evaluate(ea, out, err);
}

int run(int argc, const char* const* argv) { return run(argc, argv, std::cout, std::cerr); }

}  // namespace nanoseg::cli
