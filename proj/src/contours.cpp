#include "nanoseg/contours.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>
#include <string>

namespace nanoseg {

namespace {

// Neighbor directions; the index grows clockwise on screen (y points down).
constexpr int kDx[8] = {1, 1, 0, -1, -1, -1, 0, 1};
constexpr int kDy[8] = {0, 1, 1, 1, 0, -1, -1, -1};
constexpr int kWest = 4;

int direction(Point from, Point to) {
  for (int d = 0; d < 8; ++d) {
    if (from.x + kDx[d] == to.x && from.y + kDy[d] == to.y) return d;
  }
  throw std::logic_error("contour trace: points are not 8-adjacent");
}

// Suzuki-Abe border following for an outer border whose start pixel has a
// background pixel on its left.
std::vector<Point> trace_outer_border(const BinaryMask& m, Point start) {
  auto fg = [&m](int x, int y) { return m.in_bounds(x, y) && m.test(x, y); };

  int first = -1;
  for (int k = 0; k < 8; ++k) {
    const int d = (kWest + k) % 8;
    if (fg(start.x + kDx[d], start.y + kDy[d])) {
      first = d;
      break;
    }
  }
  if (first < 0) return {start};

  const Point p1{start.x + kDx[first], start.y + kDy[first]};
  Point prev = p1;
  Point cur = start;
  std::vector<Point> pts;
  for (;;) {
    const int back = direction(cur, prev);
    Point next = prev;
    for (int k = 1; k <= 8; ++k) {
      const int d = (back - k + 8) % 8;
      if (fg(cur.x + kDx[d], cur.y + kDy[d])) {
        next = {cur.x + kDx[d], cur.y + kDy[d]};
        break;
      }
    }
    pts.push_back(cur);
    if (next == start && cur == p1) break;
    prev = cur;
    cur = next;
  }
  return pts;
}

Rect bounding_box(std::span<const Point> pts) {
  int x0 = std::numeric_limits<int>::max();
  int y0 = x0;
  int x1 = std::numeric_limits<int>::min();
  int y1 = x1;
  for (const Point& p : pts) {
    x0 = std::min(x0, p.x);
    y0 = std::min(y0, p.y);
    x1 = std::max(x1, p.x);
    y1 = std::max(y1, p.y);
  }
  return {{x0, y0}, x1 - x0 + 1, y1 - y0 + 1};
}

}  // namespace

BinaryMask fill_within_bbox(const Contour& contour) {
  if (contour.points.empty()) throw std::invalid_argument("contour has no points");
  const Rect& box = contour.bbox;
  // Work on the box plus a one-pixel background frame; flooding the frame
  // with 4-connectivity reaches exactly the unenclosed pixels.
  const int fw = box.width + 2;
  const int fh = box.height + 2;
  enum : std::uint8_t { kFree = 0, kWall = 1, kOutside = 2 };
  std::vector<std::uint8_t> state(static_cast<std::size_t>(fw) * fh, kFree);
  for (const Point& p : contour.points) {
    const int lx = p.x - box.origin.x + 1;
    const int ly = p.y - box.origin.y + 1;
    if (lx < 1 || ly < 1 || lx > box.width || ly > box.height) {
      throw std::invalid_argument("contour point outside its bounding box");
    }
    state[static_cast<std::size_t>(ly) * fw + lx] = kWall;
  }

  std::vector<int> stack;
  stack.reserve(static_cast<std::size_t>(2 * (fw + fh)));
  auto push = [&](int x, int y) {
    const std::size_t i = static_cast<std::size_t>(y) * fw + x;
    if (state[i] == kFree) {
      state[i] = kOutside;
      stack.push_back(static_cast<int>(i));
    }
  };
  for (int x = 0; x < fw; ++x) {
    push(x, 0);
    push(x, fh - 1);
  }
  for (int y = 0; y < fh; ++y) {
    push(0, y);
    push(fw - 1, y);
  }
  while (!stack.empty()) {
    const int i = stack.back();
    stack.pop_back();
    const int x = i % fw;
    const int y = i / fw;
    if (x > 0) push(x - 1, y);
    if (x + 1 < fw) push(x + 1, y);
    if (y > 0) push(x, y - 1);
    if (y + 1 < fh) push(x, y + 1);
  }

  BinaryMask out(box.width, box.height);
  for (int y = 0; y < box.height; ++y) {
    const std::uint8_t* src = state.data() + static_cast<std::size_t>(y + 1) * fw + 1;
    std::uint8_t* dst = out.row(y);
    for (int x = 0; x < box.width; ++x) {
      dst[x] = src[x] == kOutside ? BinaryMask::kOff : BinaryMask::kOn;
    }
  }
  return out;
}

Contour make_contour(std::vector<Point> points) {
  if (points.empty()) throw std::invalid_argument("make_contour: empty point list");
  Contour c;
  c.bbox = bounding_box(points);
  c.points = std::move(points);
  const BinaryMask filled = fill_within_bbox(c);
  std::int64_t area = 0;
  double sx = 0.0;
  double sy = 0.0;
  for (int y = 0; y < filled.height(); ++y) {
    const std::uint8_t* row = filled.row(y);
    for (int x = 0; x < filled.width(); ++x) {
      if (row[x]) {
        ++area;
        sx += x;
        sy += y;
      }
    }
  }
  c.filled_area = area;
  c.centroid_x = c.bbox.origin.x + sx / static_cast<double>(area);
  c.centroid_y = c.bbox.origin.y + sy / static_cast<double>(area);
  return c;
}

std::vector<Contour> find_outer_contours(const BinaryMask& mask) {
  const int w = mask.width();
  const int h = mask.height();
  const auto at = [w](int x, int y) { return static_cast<std::size_t>(y) * w + x; };
  auto px = mask.pixels();

  // Background 4-connected to the image frame.
  std::vector<std::uint8_t> outer(px.size(), 0);
  std::vector<std::size_t> stack;
  auto seed_outer = [&](int x, int y) {
    const std::size_t i = at(x, y);
    if (!px[i] && !outer[i]) {
      outer[i] = 1;
      stack.push_back(i);
    }
  };
  for (int x = 0; x < w; ++x) {
    seed_outer(x, 0);
    seed_outer(x, h - 1);
  }
  for (int y = 0; y < h; ++y) {
    seed_outer(0, y);
    seed_outer(w - 1, y);
  }
  while (!stack.empty()) {
    const std::size_t i = stack.back();
    stack.pop_back();
    const int x = static_cast<int>(i % w);
    const int y = static_cast<int>(i / w);
    if (x > 0) seed_outer(x - 1, y);
    if (x + 1 < w) seed_outer(x + 1, y);
    if (y > 0) seed_outer(x, y - 1);
    if (y + 1 < h) seed_outer(x, y + 1);
  }

  std::vector<std::uint8_t> seen(px.size(), 0);
  std::vector<Contour> contours;
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const std::size_t i = at(x, y);
      if (!px[i] || seen[i]) continue;

      // First raster pixel of a new component: the pixel above it belongs
      // to the background region that surrounds the component.
      const bool top_level = y == 0 || outer[at(x, y - 1)];

      seen[i] = 1;
      stack.push_back(i);
      while (!stack.empty()) {
        const std::size_t j = stack.back();
        stack.pop_back();
        const int cx = static_cast<int>(j % w);
        const int cy = static_cast<int>(j / w);
        for (int dy = -1; dy <= 1; ++dy) {
          for (int dx = -1; dx <= 1; ++dx) {
            const int nx = cx + dx;
            const int ny = cy + dy;
            if (nx < 0 || ny < 0 || nx >= w || ny >= h) continue;
            const std::size_t k = at(nx, ny);
            if (px[k] && !seen[k]) {
              seen[k] = 1;
              stack.push_back(k);
            }
          }
        }
      }

      if (top_level) contours.push_back(make_contour(trace_outer_border(mask, {x, y})));
    }
  }
  return contours;
}

std::vector<Contour> filter_min_area(std::span<const Contour> contours, const AreaPolicy& policy) {
  if (policy.absolute_min < 0 || policy.relative_fraction < 0.0 ||
      policy.relative_fraction > 1.0) {
    throw std::invalid_argument("area policy: absolute_min >= 0 and fraction in [0,1] required");
  }
  std::int64_t largest = 0;
  for (const Contour& c : contours) largest = std::max(largest, c.filled_area);
  const double relative = policy.relative_fraction * static_cast<double>(largest);
  const double threshold = std::max(static_cast<double>(policy.absolute_min), relative);

  std::vector<Contour> kept;
  for (const Contour& c : contours) {
    if (static_cast<double>(c.filled_area) >= threshold) kept.push_back(c);
  }
  return kept;
}

BinaryMask rasterize_and_fill(const Contour& contour, int width, int height) {
  for (const Point& p : contour.points) {
    if (p.x < 0 || p.y < 0 || p.x >= width || p.y >= height) {
      throw std::out_of_range("contour point (" + std::to_string(p.x) + "," +
                              std::to_string(p.y) + ") outside " + std::to_string(width) +
                              "x" + std::to_string(height));
    }
  }
  BinaryMask out(width, height);
  if (contour.points.empty()) return out;
  Contour local = contour;
  local.bbox = bounding_box(contour.points);
  const BinaryMask box = fill_within_bbox(local);
  for (int y = 0; y < box.height(); ++y) {
    const std::uint8_t* src = box.row(y);
    std::uint8_t* dst = out.row(local.bbox.origin.y + y) + local.bbox.origin.x;
    std::copy(src, src + box.width(), dst);
  }
  return out;
}

RgbImage render_overlay(const GrayImage& img, std::span<const Contour> contours) {
  RgbImage out(img.width(), img.height());
  for (int y = 0; y < img.height(); ++y) {
    for (int x = 0; x < img.width(); ++x) {
      const std::uint8_t v = img(x, y);
      out.set(x, y, {v, v, v});
    }
  }
  for (const Contour& c : contours) {
    for (const Point& p : c.points) {
      if (img.in_bounds(p.x, p.y)) out.set(p.x, p.y, {255, 0, 0});
    }
  }
  return out;
}

}  // namespace nanoseg
