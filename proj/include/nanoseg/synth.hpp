#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "nanoseg/image.hpp"
#include "nanoseg/pipeline.hpp"

namespace nanoseg {

/// Illumination regime of a synthetic scene.
enum class Exposure {
  Even,       // uniform particle brightness
  Cross,      // bright cross-shaped highlight on every particle
  Satellite,  // small debris blobs on the substrate, not part of the truth
  Polarized,  // linear illumination ramp across the canvas
};

const char* to_string(Exposure e);
Exposure exposure_from_string(const std::string& s);

/// Parameters of a synthetic micrograph. Particles are convex blobs (discs
/// cut by their power-diagram cells) separated by dark cracks at least
/// `gap` pixels wide.
struct SceneSpec {
  int width = 256;
  int height = 256;
  int particle_count = 16;
  int radius_min = 12;
  int radius_max = 20;
  int gap = 2;
  Exposure exposure = Exposure::Even;
  double noise_sigma = 0.0;
  std::uint64_t seed = 7;

  // Intensity model.
  int body_level = 180;
  int crack_level = 20;
  int cross_boost = 60;
  int ramp_amplitude = 60;

  void validate() const;
  bool operator==(const SceneSpec&) const = default;
};

struct TrueParticle {
  int id = 0;
  std::int64_t area = 0;
  double centroid_x = 0.0;
  double centroid_y = 0.0;
};

/// Label raster (0 = background, particles 1..N) plus per-particle facts.
struct GroundTruth {
  int width = 0;
  int height = 0;
  std::vector<std::int32_t> labels;
  std::vector<TrueParticle> particles;

  [[nodiscard]] std::int32_t label(int x, int y) const {
    return labels[static_cast<std::size_t>(y) * width + x];
  }
  /// Labels as an 8-bit image; requires at most 255 particles.
  [[nodiscard]] GrayImage label_image() const;
};

/// Rebuilds ground truth from a label image. Labels must be dense 1..max.
GroundTruth truth_from_labels(const GrayImage& labels);

struct Scene {
  GrayImage image;
  GroundTruth truth;
};

class GenerationError : public Error {
 public:
  GenerationError(const std::string& what, int attempts, int placed)
      : Error(what), attempts_(attempts), placed_(placed) {}
  [[nodiscard]] int attempts() const { return attempts_; }
  [[nodiscard]] int placed() const { return placed_; }

 private:
  int attempts_;
  int placed_;
};

/// Deterministic for a fixed spec. Throws GenerationError when
/// particle_count blobs cannot be placed within 10 * particle_count attempts.
Scene generate(const SceneSpec& spec);

struct Metrics {
  std::size_t detected = 0;
  std::size_t truth_count = 0;
  std::size_t matched = 0;
  double count_error = 0.0;  // |detected - N| / N
  double precision = 0.0;    // 0 when nothing was detected
  double recall = 0.0;
  double mean_iou = 0.0;     // over matched pairs; 0 when none matched
};

inline constexpr double kMatchIou = 0.5;

/// Greedy one-to-one matching by descending IoU of filled detected regions
/// against label regions; pairs below kMatchIou never match.
Metrics evaluate(std::span<const Contour> detections, int width, int height,
                 const GroundTruth& gt);
Metrics evaluate(const AnalysisReport& report, const GroundTruth& gt);

/// A report whose detections are exactly the ground-truth regions.
AnalysisReport report_from_truth(const GroundTruth& gt);

}  // namespace nanoseg
