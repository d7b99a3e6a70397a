#include "nanoseg/synth.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <stdexcept>
#include <tuple>

namespace nanoseg {

const char* to_string(Exposure e) {
  switch (e) {
    case Exposure::Even: return "even";
    case Exposure::Cross: return "cross";
    case Exposure::Satellite: return "satellite";
    case Exposure::Polarized: return "polarized";
  }
  return "even";
}

Exposure exposure_from_string(const std::string& s) {
  if (s == "even") return Exposure::Even;
  if (s == "cross") return Exposure::Cross;
  if (s == "satellite") return Exposure::Satellite;
  if (s == "polarized") return Exposure::Polarized;
  throw std::invalid_argument("unknown exposure '" + s +
                              "' (expected even, cross, satellite or polarized)");
}

void SceneSpec::validate() const {
  auto fail = [](const std::string& field, const std::string& why) {
    throw std::invalid_argument("scene field '" + field + "': " + why);
  };
  if (width < 1 || height < 1) fail("width/height", "must be >= 1");
  if (particle_count < 1) fail("particle_count", "must be >= 1");
  if (radius_min < 1 || radius_max < radius_min) fail("radius_range", "need 1 <= min <= max");
  if (gap < 1) fail("gap", "must be >= 1");
  if (2 * (radius_min + gap) >= std::min(width, height)) {
    fail("radius_range", "smallest particle plus gap does not fit the canvas");
  }
  if (noise_sigma < 0.0) fail("noise_sigma", "must be >= 0");
  for (auto [name, v] : {std::pair{"body_level", body_level}, {"crack_level", crack_level}}) {
    if (v < 0 || v > 255) fail(name, "must be in [0,255]");
  }
  if (crack_level > 30) fail("crack_level", "cracks must stay at or below 30");
  if (cross_boost < 0 || cross_boost > 255) fail("cross_boost", "must be in [0,255]");
  if (ramp_amplitude < 0 || ramp_amplitude > 255) fail("ramp_amplitude", "must be in [0,255]");
}

GrayImage GroundTruth::label_image() const {
  if (particles.size() > 255) {
    throw std::invalid_argument("label image holds at most 255 particles");
  }
  std::vector<std::uint8_t> bytes(labels.begin(), labels.end());
  return GrayImage(width, height, std::move(bytes));
}

namespace {

void fill_particle_facts(GroundTruth& gt, int count) {
  gt.particles.assign(static_cast<std::size_t>(count), {});
  std::vector<double> sx(static_cast<std::size_t>(count), 0.0);
  std::vector<double> sy(sx.size(), 0.0);
  for (int y = 0; y < gt.height; ++y) {
    for (int x = 0; x < gt.width; ++x) {
      const std::int32_t l = gt.label(x, y);
      if (l == 0) continue;
      auto& p = gt.particles[static_cast<std::size_t>(l - 1)];
      ++p.area;
      sx[l - 1] += x;
      sy[l - 1] += y;
    }
  }
  for (int i = 0; i < count; ++i) {
    auto& p = gt.particles[static_cast<std::size_t>(i)];
    p.id = i + 1;
    if (p.area > 0) {
      p.centroid_x = sx[i] / static_cast<double>(p.area);
      p.centroid_y = sy[i] / static_cast<double>(p.area);
    }
  }
}

// mt19937_64 is fully specified; the distributions below are written out so
// scenes are identical across standard libraries.
class SceneRng {
 public:
  explicit SceneRng(std::uint64_t seed) : engine_(seed) {}

  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  int uniform_int(int lo, int hi) {
    const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
    return lo + static_cast<int>(engine_() % span);
  }

  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    const double u1 = 1.0 - uniform();  // (0, 1]
    const double u2 = uniform();
    const double mag = std::sqrt(-2.0 * std::log(u1));
    spare_ = mag * std::sin(2.0 * std::numbers::pi * u2);
    has_spare_ = true;
    return mag * std::cos(2.0 * std::numbers::pi * u2);
  }

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

struct Blob {
  int cx;
  int cy;
  int r;
};

// Minimum centre distance as a fraction of the radius sum; below 1 the
// discs overlap and share a straight crack along their power-diagram edge.
constexpr double kCenterSpacing = 0.7;

std::vector<Blob> place_blobs(const SceneSpec& spec, SceneRng& rng) {
  const int budget = 10 * spec.particle_count;
  std::vector<Blob> blobs;
  int attempts = 0;
  while (static_cast<int>(blobs.size()) < spec.particle_count && attempts < budget) {
    ++attempts;
    const int r = rng.uniform_int(spec.radius_min, spec.radius_max);
    // Centres keep only a short inset, so border particles may be cut by the frame.
    const int margin = r / 4 + spec.gap;
    if (2 * margin >= spec.width || 2 * margin >= spec.height) continue;
    const Blob b{rng.uniform_int(margin, spec.width - 1 - margin),
                 rng.uniform_int(margin, spec.height - 1 - margin), r};
    const bool clear = std::all_of(blobs.begin(), blobs.end(), [&](const Blob& o) {
      const double d = std::hypot(b.cx - o.cx, b.cy - o.cy);
      return d >= kCenterSpacing * (b.r + o.r);
    });
    if (clear) blobs.push_back(b);
  }
  if (static_cast<int>(blobs.size()) < spec.particle_count) {
    throw GenerationError("cannot place " + std::to_string(spec.particle_count) +
                              " particles: only " + std::to_string(blobs.size()) +
                              " fit after " + std::to_string(attempts) + " attempts",
                          attempts, static_cast<int>(blobs.size()));
  }
  return blobs;
}

// Each disc pixel goes to the blob with the smallest power distance.
std::vector<std::int32_t> power_labels(const SceneSpec& spec, const std::vector<Blob>& blobs) {
  const int w = spec.width;
  const int h = spec.height;
  std::vector<std::int32_t> labels(static_cast<std::size_t>(w) * h, 0);
  std::vector<double> power(labels.size(), std::numeric_limits<double>::infinity());
  for (std::size_t i = 0; i < blobs.size(); ++i) {
    const Blob& b = blobs[i];
    const double r2 = static_cast<double>(b.r) * b.r;
    for (int y = std::max(0, b.cy - b.r); y <= std::min(h - 1, b.cy + b.r); ++y) {
      for (int x = std::max(0, b.cx - b.r); x <= std::min(w - 1, b.cx + b.r); ++x) {
        const double d2 = static_cast<double>(x - b.cx) * (x - b.cx) +
                          static_cast<double>(y - b.cy) * (y - b.cy);
        if (d2 > r2) continue;
        const std::size_t k = static_cast<std::size_t>(y) * w + x;
        const double pw = d2 - r2;
        if (pw < power[k]) {
          power[k] = pw;
          labels[k] = static_cast<std::int32_t>(i + 1);
        }
      }
    }
  }
  return labels;
}

// Clears pixels of `labels` that have a different nonzero label within
// Chebyshev distance `radius` in the snapshot; with `larger_only`, only the
// pixel carrying the larger label is cleared.
void carve(std::vector<std::int32_t>& labels, int w, int h, int radius, bool larger_only) {
  if (radius < 1) return;
  const std::vector<std::int32_t> snapshot = labels;
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const std::int32_t l = snapshot[static_cast<std::size_t>(y) * w + x];
      if (l == 0) continue;
      bool clash = false;
      for (int dy = -radius; dy <= radius && !clash; ++dy) {
        const int ny = y + dy;
        if (ny < 0 || ny >= h) continue;
        for (int dx = -radius; dx <= radius && !clash; ++dx) {
          const int nx = x + dx;
          if (nx < 0 || nx >= w) continue;
          const std::int32_t o = snapshot[static_cast<std::size_t>(ny) * w + nx];
          clash = o != 0 && o != l && (!larger_only || o < l);
        }
      }
      if (clash) labels[static_cast<std::size_t>(y) * w + x] = 0;
    }
  }
}

// Keeps only the largest 8-connected piece of every label.
void keep_largest_pieces(std::vector<std::int32_t>& labels, int w, int h, int count) {
  std::vector<std::int32_t> piece(labels.size(), -1);
  std::vector<std::int64_t> piece_size;
  std::vector<std::int32_t> piece_label;
  std::vector<std::size_t> stack;
  for (std::size_t s = 0; s < labels.size(); ++s) {
    if (labels[s] == 0 || piece[s] >= 0) continue;
    const auto id = static_cast<std::int32_t>(piece_size.size());
    piece_size.push_back(0);
    piece_label.push_back(labels[s]);
    piece[s] = id;
    stack.push_back(s);
    while (!stack.empty()) {
      const std::size_t k = stack.back();
      stack.pop_back();
      ++piece_size[id];
      const int x = static_cast<int>(k % w);
      const int y = static_cast<int>(k / w);
      for (int dy = -1; dy <= 1; ++dy) {
        for (int dx = -1; dx <= 1; ++dx) {
          const int nx = x + dx;
          const int ny = y + dy;
          if (nx < 0 || ny < 0 || nx >= w || ny >= h) continue;
          const std::size_t n = static_cast<std::size_t>(ny) * w + nx;
          if (labels[n] == labels[s] && piece[n] < 0) {
            piece[n] = id;
            stack.push_back(n);
          }
        }
      }
    }
  }
  std::vector<std::int32_t> best(static_cast<std::size_t>(count) + 1, -1);
  for (std::size_t p = 0; p < piece_size.size(); ++p) {
    auto& b = best[static_cast<std::size_t>(piece_label[p])];
    if (b < 0 || piece_size[p] > piece_size[static_cast<std::size_t>(b)]) {
      b = static_cast<std::int32_t>(p);
    }
  }
  for (std::size_t k = 0; k < labels.size(); ++k) {
    if (labels[k] != 0 && best[static_cast<std::size_t>(labels[k])] != piece[k]) labels[k] = 0;
  }
}

// Debris blobs sit on the substrate, more than `gap` pixels from any particle.
std::vector<Blob> place_debris(const SceneSpec& spec, const std::vector<std::int32_t>& labels,
                               SceneRng& rng) {
  const int w = spec.width;
  const int h = spec.height;
  const int wanted = 2 * spec.particle_count;
  std::vector<Blob> debris;
  std::vector<std::uint8_t> taken(labels.size(), 0);
  for (std::size_t k = 0; k < labels.size(); ++k) taken[k] = labels[k] != 0;

  for (int attempt = 0; attempt < 20 * wanted && static_cast<int>(debris.size()) < wanted;
       ++attempt) {
    const int r = rng.uniform_int(1, 3);
    const int reach = r + spec.gap;
    if (w <= 2 * reach || h <= 2 * reach) break;
    const Blob b{rng.uniform_int(reach, w - 1 - reach), rng.uniform_int(reach, h - 1 - reach), r};
    bool free = true;
    for (int dy = -reach; dy <= reach && free; ++dy) {
      for (int dx = -reach; dx <= reach && free; ++dx) {
        free = !taken[static_cast<std::size_t>(b.cy + dy) * w + (b.cx + dx)];
      }
    }
    if (!free) continue;
    debris.push_back(b);
    for (int dy = -r; dy <= r; ++dy) {
      for (int dx = -r; dx <= r; ++dx) {
        if (dx * dx + dy * dy <= r * r) taken[static_cast<std::size_t>(b.cy + dy) * w + (b.cx + dx)] = 1;
      }
    }
  }
  return debris;
}

}  // namespace

Scene generate(const SceneSpec& spec) {
  spec.validate();
  const int w = spec.width;
  const int h = spec.height;
  SceneRng rng(spec.seed);

  const std::vector<Blob> blobs = place_blobs(spec, rng);
  std::vector<std::int32_t> labels = power_labels(spec, blobs);
  carve(labels, w, h, spec.gap / 2, false);
  carve(labels, w, h, spec.gap, true);
  keep_largest_pieces(labels, w, h, spec.particle_count);

  GroundTruth truth;
  truth.width = w;
  truth.height = h;
  truth.labels = std::move(labels);
  fill_particle_facts(truth, spec.particle_count);
  for (const TrueParticle& p : truth.particles) {
    if (p.area == 0) {
      throw GenerationError("particle " + std::to_string(p.id) + " vanished during carving",
                            0, spec.particle_count);
    }
  }

  std::vector<double> level(truth.labels.size(), static_cast<double>(spec.crack_level));
  for (std::size_t k = 0; k < level.size(); ++k) {
    if (truth.labels[k] != 0) level[k] = spec.body_level;
  }

  if (spec.exposure == Exposure::Cross) {
    for (std::size_t i = 0; i < blobs.size(); ++i) {
      const Blob& b = blobs[i];
      const auto id = static_cast<std::int32_t>(i + 1);
      const int arm = static_cast<int>(std::lround(0.65 * b.r));
      const int half = std::max(1, b.r / 6);
      for (int y = std::max(0, b.cy - arm); y <= std::min(h - 1, b.cy + arm); ++y) {
        for (int x = std::max(0, b.cx - arm); x <= std::min(w - 1, b.cx + arm); ++x) {
          const int dx = std::abs(x - b.cx);
          const int dy = std::abs(y - b.cy);
          const bool on_cross = dx <= half || dy <= half;
          const std::size_t k = static_cast<std::size_t>(y) * w + x;
          if (on_cross && truth.labels[k] == id) level[k] += spec.cross_boost;
        }
      }
    }
  }

  if (spec.exposure == Exposure::Satellite) {
    for (const Blob& d : place_debris(spec, truth.labels, rng)) {
      for (int dy = -d.r; dy <= d.r; ++dy) {
        for (int dx = -d.r; dx <= d.r; ++dx) {
          if (dx * dx + dy * dy <= d.r * d.r) {
            level[static_cast<std::size_t>(d.cy + dy) * w + (d.cx + dx)] = spec.body_level;
          }
        }
      }
    }
  }

  if (spec.exposure == Exposure::Polarized && w > 1) {
    for (int y = 0; y < h; ++y) {
      for (int x = 0; x < w; ++x) {
        const double t = 2.0 * x / (w - 1) - 1.0;
        level[static_cast<std::size_t>(y) * w + x] += spec.ramp_amplitude * t;
      }
    }
  }

  GrayImage image(w, h);
  auto px = image.pixels();
  for (std::size_t k = 0; k < level.size(); ++k) {
    double v = level[k];
    if (spec.noise_sigma > 0.0) v += spec.noise_sigma * rng.normal();
    px[k] = static_cast<std::uint8_t>(std::clamp(std::lround(v), 0L, 255L));
  }
  return {std::move(image), std::move(truth)};
}

GroundTruth truth_from_labels(const GrayImage& labels) {
  GroundTruth gt;
  gt.width = labels.width();
  gt.height = labels.height();
  gt.labels.assign(labels.pixels().begin(), labels.pixels().end());
  int count = 0;
  for (auto l : gt.labels) count = std::max(count, static_cast<int>(l));
  fill_particle_facts(gt, count);
  for (const TrueParticle& p : gt.particles) {
    if (p.area == 0) {
      throw std::invalid_argument("label " + std::to_string(p.id) +
                                  " is missing; labels must be dense 1..N");
    }
  }
  return gt;
}

Metrics evaluate(std::span<const Contour> detections, int width, int height,
                 const GroundTruth& gt) {
  if (width != gt.width || height != gt.height) {
    throw std::invalid_argument("evaluate: report is " + std::to_string(width) + "x" +
                                std::to_string(height) + " but ground truth is " +
                                std::to_string(gt.width) + "x" + std::to_string(gt.height));
  }
  Metrics m;
  m.detected = detections.size();
  m.truth_count = gt.particles.size();

  struct Candidate {
    double iou;
    std::size_t det;
    std::int32_t truth;
  };
  std::vector<Candidate> candidates;
  for (std::size_t i = 0; i < detections.size(); ++i) {
    const Contour& c = detections[i];
    if (c.bbox.origin.x < 0 || c.bbox.origin.y < 0 || c.bbox.right() > width ||
        c.bbox.bottom() > height) {
      throw std::invalid_argument("evaluate: detection lies outside the canvas");
    }
    const BinaryMask filled = fill_within_bbox(c);
    std::vector<std::pair<std::int32_t, std::int64_t>> overlap;  // (label, pixels)
    std::int64_t area = 0;
    for (int y = 0; y < filled.height(); ++y) {
      for (int x = 0; x < filled.width(); ++x) {
        if (!filled.test(x, y)) continue;
        ++area;
        const std::int32_t l = gt.label(c.bbox.origin.x + x, c.bbox.origin.y + y);
        if (l == 0) continue;
        auto it = std::find_if(overlap.begin(), overlap.end(),
                               [l](const auto& e) { return e.first == l; });
        if (it == overlap.end()) {
          overlap.emplace_back(l, 1);
        } else {
          ++it->second;
        }
      }
    }
    for (const auto& [l, inter] : overlap) {
      const std::int64_t truth_area = gt.particles[static_cast<std::size_t>(l - 1)].area;
      const double iou = static_cast<double>(inter) / static_cast<double>(area + truth_area - inter);
      if (iou >= kMatchIou) candidates.push_back({iou, i, l});
    }
  }

  std::sort(candidates.begin(), candidates.end(), [](const Candidate& a, const Candidate& b) {
    return std::tie(b.iou, a.det, a.truth) < std::tie(a.iou, b.det, b.truth);
  });
  std::vector<std::uint8_t> det_used(detections.size(), 0);
  std::vector<std::uint8_t> truth_used(gt.particles.size() + 1, 0);
  double iou_sum = 0.0;
  for (const Candidate& c : candidates) {
    if (det_used[c.det] || truth_used[static_cast<std::size_t>(c.truth)]) continue;
    det_used[c.det] = 1;
    truth_used[static_cast<std::size_t>(c.truth)] = 1;
    ++m.matched;
    iou_sum += c.iou;
  }

  const auto n = static_cast<double>(m.truth_count);
  if (m.truth_count > 0) {
    m.count_error = std::abs(static_cast<double>(m.detected) - n) / n;
    m.recall = static_cast<double>(m.matched) / n;
  } else {
    m.count_error = m.detected == 0 ? 0.0 : 1.0;
  }
  m.precision = m.detected > 0 ? static_cast<double>(m.matched) / static_cast<double>(m.detected) : 0.0;
  m.mean_iou = m.matched > 0 ? iou_sum / static_cast<double>(m.matched) : 0.0;
  return m;
}

Metrics evaluate(const AnalysisReport& report, const GroundTruth& gt) {
  return evaluate(report.contours, report.width, report.height, gt);
}

AnalysisReport report_from_truth(const GroundTruth& gt) {
  BinaryMask all(gt.width, gt.height);
  std::vector<BinaryMask> per_label(gt.particles.size(), BinaryMask(gt.width, gt.height));
  for (int y = 0; y < gt.height; ++y) {
    for (int x = 0; x < gt.width; ++x) {
      const std::int32_t l = gt.label(x, y);
      if (l == 0) continue;
      all.set(x, y);
      per_label[static_cast<std::size_t>(l - 1)].set(x, y);
    }
  }
  std::vector<Contour> contours;
  for (const BinaryMask& m : per_label) {
    auto found = find_outer_contours(m);
    contours.insert(contours.end(), found.begin(), found.end());
  }
  PipelineConfig cfg;
  cfg.area_policy = {0, 0.0};
  return make_report(Method::Superposition, std::move(contours), std::move(all), cfg);
}

}  // namespace nanoseg
