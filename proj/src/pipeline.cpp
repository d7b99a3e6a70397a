#include "nanoseg/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "internal.hpp"

namespace nanoseg {

const char* to_string(Method m) {
  return m == Method::Conventional ? "conventional" : "superposition";
}

void PipelineConfig::validate() const {
  auto fail = [](const std::string& field, const std::string& why) {
    throw std::invalid_argument("config field '" + field + "': " + why);
  };
  if (smoothing.method != SmoothingMethod::None &&
      (smoothing.kernel_size < 3 || smoothing.kernel_size % 2 == 0)) {
    fail("smoothing.kernel_size", "must be odd and >= 3");
  }
  if (binary_t < 0 || binary_t > 255) fail("binary_t", "must be in [0,255]");
  try {
    detail::validate_adaptive(adaptive);
  } catch (const std::invalid_argument& e) {
    fail("adaptive", e.what());
  }
  try {
    detail::validate_morphology(open_se, open_iters);
  } catch (const std::invalid_argument& e) {
    fail("open_se/open_iters", e.what());
  }
  try {
    detail::validate_morphology(close_se, close_iters);
  } catch (const std::invalid_argument& e) {
    fail("close_se/close_iters", e.what());
  }
  if (area_policy.absolute_min < 0) fail("area_policy.absolute_min", "must be >= 0");
  if (!(area_policy.relative_fraction >= 0.0 && area_policy.relative_fraction <= 1.0)) {
    fail("area_policy.relative_fraction", "must be in [0,1]");
  }
  if (!(histogram_bin_width > 0.0)) fail("histogram_bin_width", "must be > 0");
}

double equivalent_diameter(std::int64_t area) {
  return 2.0 * std::sqrt(static_cast<double>(area) / std::numbers::pi);
}

ParticleStats compute_stats(std::span<const Contour> contours, double bin_width) {
  if (!(bin_width > 0.0)) throw std::invalid_argument("histogram bin width must be > 0");
  ParticleStats stats;
  stats.count = contours.size();
  stats.diameter_histogram.bin_width = bin_width;
  if (contours.empty()) return stats;

  std::vector<std::int64_t> areas;
  areas.reserve(contours.size());
  for (const Contour& c : contours) areas.push_back(c.filled_area);
  std::sort(areas.begin(), areas.end());
  std::int64_t sum = 0;
  for (auto a : areas) sum += a;
  stats.area.min = areas.front();
  stats.area.max = areas.back();
  stats.area.mean = static_cast<double>(sum) / static_cast<double>(areas.size());
  stats.area.median = areas[(areas.size() - 1) / 2];

  auto& counts = stats.diameter_histogram.counts;
  const auto bin_of = [bin_width](std::int64_t area) {
    return static_cast<std::size_t>(std::floor(equivalent_diameter(area) / bin_width));
  };
  counts.assign(bin_of(areas.back()) + 1, 0);
  for (auto a : areas) ++counts[bin_of(a)];
  return stats;
}

AnalysisReport make_report(Method method, std::vector<Contour> contours, BinaryMask mask,
                           const PipelineConfig& cfg, std::vector<bool> touches_border) {
  AnalysisReport report;
  report.method = method;
  report.width = mask.width();
  report.height = mask.height();
  report.config = cfg;

  if (touches_border.empty()) {
    for (const Contour& c : contours) touches_border.push_back(c.touches_border(report.width, report.height));
  }
  if (touches_border.size() != contours.size()) {
    throw std::invalid_argument("make_report: one border flag per contour required");
  }

  int id = 0;
  for (std::size_t i = 0; i < contours.size(); ++i) {
    if (cfg.exclude_border_particles && touches_border[i]) continue;
    const Contour& c = contours[i];
    ParticleRecord rec;
    rec.id = ++id;
    rec.filled_area = c.filled_area;
    rec.equivalent_diameter = equivalent_diameter(c.filled_area);
    rec.centroid_x = c.centroid_x;
    rec.centroid_y = c.centroid_y;
    rec.bbox = c.bbox;
    rec.touches_border = touches_border[i];
    report.particles.push_back(rec);
    report.contours.push_back(std::move(contours[i]));
  }
  report.mask = std::move(mask);

  const ParticleStats stats = compute_stats(report.contours, cfg.histogram_bin_width);
  report.count = stats.count;
  report.area_stats = stats.area;
  report.diameter_histogram = stats.diameter_histogram;
  return report;
}

GrayImage preprocess_step(const GrayImage& img, const PipelineConfig& cfg) {
  GrayImage out = smooth(img, cfg.smoothing);
  if (cfg.equalize) out = equalize_histogram(out);
  return out;
}

BinaryMask superposition_mask(const GrayImage& pre, const PipelineConfig& cfg) {
  const BinaryMask adaptive =
      open_op(adaptive_threshold(pre, cfg.adaptive), cfg.open_se, cfg.open_iters);
  const BinaryMask global =
      open_op(binary_threshold(pre, cfg.binary_t), cfg.open_se, cfg.open_iters);
  return bitwise_and(adaptive, global);
}

namespace {

struct LocalMask {
  Rect window;
  BinaryMask mask;
};

// Outside the padded window the full-raster closing is identically zero,
// and inside it the window's own out-of-bounds pixels are zero as well, so
// closing the window reproduces the full-raster result exactly.
LocalMask close_particle(const Contour& c, int width, int height, StructuringElement se,
                         int iters) {
  const int mx = (se.width / 2) * iters;
  const int my = (se.height / 2) * iters;
  const int x0 = std::max(0, c.bbox.origin.x - mx);
  const int y0 = std::max(0, c.bbox.origin.y - my);
  const int x1 = std::min(width, c.bbox.right() + mx);
  const int y1 = std::min(height, c.bbox.bottom() + my);
  const Rect window{{x0, y0}, x1 - x0, y1 - y0};

  const BinaryMask filled = fill_within_bbox(c);
  BinaryMask local(window.width, window.height);
  const int ox = c.bbox.origin.x - x0;
  const int oy = c.bbox.origin.y - y0;
  for (int y = 0; y < filled.height(); ++y) {
    const std::uint8_t* src = filled.row(y);
    std::copy(src, src + filled.width(), local.row(y + oy) + ox);
  }
  return {window, close_op(local, se, iters)};
}

}  // namespace

BinaryMask superpose_closed_particles(std::span<const Contour> contours, int width, int height,
                                      StructuringElement close_se, int close_iters) {
  detail::validate_morphology(close_se, close_iters);
  for (const Contour& c : contours) {
    if (c.bbox.origin.x < 0 || c.bbox.origin.y < 0 || c.bbox.right() > width ||
        c.bbox.bottom() > height) {
      throw std::out_of_range("contour lies outside the target raster");
    }
  }

  std::vector<LocalMask> locals(contours.size());
  const auto n = static_cast<std::ptrdiff_t>(contours.size());
#pragma omp parallel for schedule(dynamic, 4)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    locals[i] = close_particle(contours[i], width, height, close_se, close_iters);
  }

  BinaryMask merged(width, height);
  for (const LocalMask& lm : locals) {
    for (int y = 0; y < lm.window.height; ++y) {
      const std::uint8_t* src = lm.mask.row(y);
      std::uint8_t* dst = merged.row(lm.window.origin.y + y) + lm.window.origin.x;
      for (int x = 0; x < lm.window.width; ++x) dst[x] |= src[x];
    }
  }
  return merged;
}

std::vector<bool> border_flags(std::span<const Contour> contours, const BinaryMask& before) {
  const int w = before.width();
  const int h = before.height();
  // Foreground of `before` 8-connected to an edge pixel.
  std::vector<std::uint8_t> edge(static_cast<std::size_t>(w) * h, 0);
  std::vector<Point> stack;
  auto push = [&](int x, int y) {
    const std::size_t k = static_cast<std::size_t>(y) * w + x;
    if (before.test(x, y) && !edge[k]) {
      edge[k] = 1;
      stack.push_back({x, y});
    }
  };
  for (int x = 0; x < w; ++x) {
    push(x, 0);
    push(x, h - 1);
  }
  for (int y = 0; y < h; ++y) {
    push(0, y);
    push(w - 1, y);
  }
  while (!stack.empty()) {
    const Point p = stack.back();
    stack.pop_back();
    for (int dy = -1; dy <= 1; ++dy) {
      for (int dx = -1; dx <= 1; ++dx) {
        if (before.in_bounds(p.x + dx, p.y + dy)) push(p.x + dx, p.y + dy);
      }
    }
  }

  std::vector<bool> flags;
  flags.reserve(contours.size());
  for (const Contour& c : contours) {
    if (c.touches_border(w, h)) {
      flags.push_back(true);
      continue;
    }
    const BinaryMask filled = fill_within_bbox(c);
    bool hit = false;
    for (int y = 0; y < filled.height() && !hit; ++y) {
      const std::uint8_t* src = filled.row(y);
      const std::size_t base = static_cast<std::size_t>(c.bbox.origin.y + y) * w + c.bbox.origin.x;
      for (int x = 0; x < filled.width() && !hit; ++x) hit = src[x] && edge[base + x];
    }
    flags.push_back(hit);
  }
  return flags;
}

DivideAndConquerResult divide_and_conquer(const BinaryMask& pm, const PipelineConfig& cfg) {
  const std::vector<Contour> first_pass = find_outer_contours(pm);
  const std::vector<Contour> kept = filter_min_area(first_pass, cfg.area_policy);
  BinaryMask merged =
      superpose_closed_particles(kept, pm.width(), pm.height(), cfg.close_se, cfg.close_iters);
  std::vector<Contour> final_pass = find_outer_contours(merged);
  std::vector<bool> flags = border_flags(final_pass, pm);
  return {std::move(merged), std::move(final_pass), std::move(flags)};
}

AnalysisReport analyze(const GrayImage& img, const PipelineConfig& cfg) {
  cfg.validate();
  const GrayImage pre = preprocess_step(img, cfg);
  const BinaryMask pm = superposition_mask(pre, cfg);
  DivideAndConquerResult dac = divide_and_conquer(pm, cfg);
  return make_report(Method::Superposition, std::move(dac.contours), std::move(dac.merged), cfg,
                     std::move(dac.touches_border));
}

AnalysisReport conventional_analyze(const GrayImage& img, const PipelineConfig& cfg) {
  cfg.validate();
  const GrayImage pre = preprocess_step(img, cfg);
  const BinaryMask opened = open_op(binary_threshold(pre, cfg.binary_t), cfg.open_se, cfg.open_iters);
  BinaryMask mask = close_op(opened, cfg.close_se, cfg.close_iters);
  const std::vector<Contour> contours = find_outer_contours(mask);
  std::vector<Contour> kept = filter_min_area(contours, cfg.area_policy);
  std::vector<bool> flags = border_flags(kept, opened);
  return make_report(Method::Conventional, std::move(kept), std::move(mask), cfg, std::move(flags));
}

}  // namespace nanoseg
