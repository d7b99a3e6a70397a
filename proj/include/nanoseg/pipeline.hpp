#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "nanoseg/contours.hpp"
#include "nanoseg/image.hpp"
#include "nanoseg/morphology.hpp"
#include "nanoseg/preprocess.hpp"
#include "nanoseg/threshold.hpp"

namespace nanoseg {

/// Every tunable of both segmentation methods.
struct PipelineConfig {
  SmoothingKind smoothing{SmoothingMethod::Gaussian, 3};
  bool equalize = true;
  int binary_t = 100;
  AdaptiveParams adaptive{};
  StructuringElement open_se{3, 3};
  int open_iters = 1;
  StructuringElement close_se{3, 3};
  int close_iters = 1;
  AreaPolicy area_policy{};
  bool exclude_border_particles = false;
  double histogram_bin_width = 5.0;

  /// Throws std::invalid_argument naming the first offending field.
  void validate() const;
  bool operator==(const PipelineConfig&) const = default;
};

enum class Method { Conventional, Superposition };

const char* to_string(Method m);

struct ParticleRecord {
  int id = 0;  // 1-based, in contour order
  std::int64_t filled_area = 0;
  double equivalent_diameter = 0.0;
  double centroid_x = 0.0;
  double centroid_y = 0.0;
  Rect bbox;
  bool touches_border = false;
};

struct AreaStats {
  std::int64_t min = 0;
  std::int64_t max = 0;
  double mean = 0.0;
  std::int64_t median = 0;  // lower median
};

/// counts[i] holds diameters in [i * bin_width, (i + 1) * bin_width).
struct DiameterHistogram {
  double bin_width = 5.0;
  std::vector<std::int64_t> counts;
};

struct ParticleStats {
  std::size_t count = 0;
  AreaStats area;
  DiameterHistogram diameter_histogram;
};

struct AnalysisReport {
  Method method = Method::Superposition;
  int width = 0;
  int height = 0;
  std::vector<ParticleRecord> particles;
  std::vector<Contour> contours;  // parallel to `particles`
  std::size_t count = 0;
  AreaStats area_stats;
  DiameterHistogram diameter_histogram;
  PipelineConfig config;
  BinaryMask mask;  // final segmentation mask
};

double equivalent_diameter(std::int64_t area);

ParticleStats compute_stats(std::span<const Contour> contours, double bin_width = 5.0);

/// Assembles records and statistics, honoring exclude_border_particles.
/// `touches_border` flags each contour; when empty, a contour touches the
/// border when its bounding box reaches the raster edge.
AnalysisReport make_report(Method method, std::vector<Contour> contours, BinaryMask mask,
                           const PipelineConfig& cfg, std::vector<bool> touches_border = {});

/// Closing treats off-raster pixels as background and so trims the outermost
/// row and column. A final contour therefore counts as touching the border
/// when its filled region overlaps a component of `before` (the mask prior to
/// closing) that reaches the raster edge.
std::vector<bool> border_flags(std::span<const Contour> contours, const BinaryMask& before);

/// Smoothing, then optional histogram equalization.
GrayImage preprocess_step(const GrayImage& img, const PipelineConfig& cfg);

/// open(adaptive(pre)) AND open(binary(pre)).
BinaryMask superposition_mask(const GrayImage& pre, const PipelineConfig& cfg);

/// Fills each contour into its own blank raster, closes it there, and ORs
/// the results into a zero-initialized accumulator. The per-contour work
/// runs in parallel on a bounding-box window padded by the closing reach;
/// the output does not depend on thread count or contour order.
BinaryMask superpose_closed_particles(std::span<const Contour> contours, int width, int height,
                                      StructuringElement close_se, int close_iters);

struct DivideAndConquerResult {
  BinaryMask merged;               // accumulated mask P+
  std::vector<Contour> contours;   // outer contours of `merged`
  std::vector<bool> touches_border;  // parallel to `contours`
};

/// Contours of `pm`, minimal-area filtering, per-contour fill and close,
/// OR accumulation, and a final contour pass.
DivideAndConquerResult divide_and_conquer(const BinaryMask& pm, const PipelineConfig& cfg);

/// Superposition divide-and-conquer segmentation.
AnalysisReport analyze(const GrayImage& img, const PipelineConfig& cfg);

/// Whole-image baseline: threshold, open, close, contours, area filter.
AnalysisReport conventional_analyze(const GrayImage& img, const PipelineConfig& cfg);

namespace reference {

/// Literal full-raster version of superpose_closed_particles.
BinaryMask superpose_closed_particles(std::span<const Contour> contours, int width, int height,
                                      StructuringElement close_se, int close_iters);

}  // namespace reference

}  // namespace nanoseg
