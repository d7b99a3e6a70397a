#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "nanoseg/image.hpp"

namespace nanoseg::testing {

inline GrayImage random_image(int w, int h, std::mt19937& rng, int lo = 0, int hi = 255) {
  std::uniform_int_distribution<int> d(lo, hi);
  GrayImage img(w, h);
  for (auto& v : img.pixels()) v = static_cast<std::uint8_t>(d(rng));
  return img;
}

inline BinaryMask random_mask(int w, int h, std::mt19937& rng, double density = 0.5) {
  std::bernoulli_distribution d(density);
  BinaryMask m(w, h);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) m.set(x, y, d(rng));
  }
  return m;
}

/// Random mask whose set pixels keep `margin` pixels from every edge.
inline BinaryMask random_interior_mask(int w, int h, int margin, std::mt19937& rng,
                                       double density = 0.5) {
  BinaryMask m = random_mask(w, h, rng, density);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      if (x < margin || y < margin || x >= w - margin || y >= h - margin) m.set(x, y, false);
    }
  }
  return m;
}

/// Rows of '#' (on) and '.' (off).
inline BinaryMask mask_from_rows(const std::vector<std::string>& rows) {
  BinaryMask m(static_cast<int>(rows[0].size()), static_cast<int>(rows.size()));
  for (int y = 0; y < m.height(); ++y) {
    for (int x = 0; x < m.width(); ++x) m.set(x, y, rows[y][x] == '#');
  }
  return m;
}

inline BinaryMask filled_rect(int w, int h, int x0, int y0, int rw, int rh) {
  BinaryMask m(w, h);
  for (int y = y0; y < y0 + rh; ++y) {
    for (int x = x0; x < x0 + rw; ++x) m.set(x, y);
  }
  return m;
}

/// Labels of 8-connected foreground components, 0 for background.
inline std::vector<int> label_components(const BinaryMask& m, int* count = nullptr) {
  const int w = m.width();
  const int h = m.height();
  std::vector<int> label(static_cast<std::size_t>(w) * h, 0);
  int next = 0;
  std::vector<std::pair<int, int>> stack;
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      if (!m.test(x, y) || label[y * w + x] != 0) continue;
      label[y * w + x] = ++next;
      stack.push_back({x, y});
      while (!stack.empty()) {
        auto [cx, cy] = stack.back();
        stack.pop_back();
        for (int dy = -1; dy <= 1; ++dy) {
          for (int dx = -1; dx <= 1; ++dx) {
            const int nx = cx + dx;
            const int ny = cy + dy;
            if (!m.in_bounds(nx, ny) || !m.test(nx, ny) || label[ny * w + nx] != 0) continue;
            label[ny * w + nx] = next;
            stack.push_back({nx, ny});
          }
        }
      }
    }
  }
  if (count) *count = next;
  return label;
}

inline int component_count(const BinaryMask& m) {
  int n = 0;
  label_components(m, &n);
  return n;
}

/// Background pixels 4-connected to the area outside the raster.
inline std::vector<std::uint8_t> outer_background(const BinaryMask& m) {
  const int w = m.width();
  const int h = m.height();
  std::vector<std::uint8_t> outer(static_cast<std::size_t>(w) * h, 0);
  std::vector<std::pair<int, int>> stack;
  auto seed = [&](int x, int y) {
    if (!m.test(x, y) && !outer[y * w + x]) {
      outer[y * w + x] = 1;
      stack.push_back({x, y});
    }
  };
  for (int x = 0; x < w; ++x) {
    seed(x, 0);
    seed(x, h - 1);
  }
  for (int y = 0; y < h; ++y) {
    seed(0, y);
    seed(w - 1, y);
  }
  while (!stack.empty()) {
    auto [x, y] = stack.back();
    stack.pop_back();
    const int nb[4][2] = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}};
    for (auto [dx, dy] : nb) {
      if (m.in_bounds(x + dx, y + dy)) seed(x + dx, y + dy);
    }
  }
  return outer;
}

struct TopLevelComponent {
  int label = 0;
  std::int64_t filled_area = 0;
};

/// Components reachable from outside the raster without crossing another
/// component, with the area each one encloses.
inline std::vector<TopLevelComponent> top_level_components(const BinaryMask& m) {
  const int w = m.width();
  const int h = m.height();
  int n = 0;
  const std::vector<int> label = label_components(m, &n);
  const std::vector<std::uint8_t> outer = outer_background(m);
  std::vector<std::uint8_t> top(static_cast<std::size_t>(n) + 1, 0);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const int l = label[y * w + x];
      if (l == 0) continue;
      if (x == 0 || y == 0 || x == w - 1 || y == h - 1) top[l] = 1;
      const int nb[4][2] = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}};
      for (auto [dx, dy] : nb) {
        if (m.in_bounds(x + dx, y + dy) && outer[(y + dy) * w + x + dx]) top[l] = 1;
      }
    }
  }
  std::vector<TopLevelComponent> result;
  for (int l = 1; l <= n; ++l) {
    if (!top[l]) continue;
    BinaryMask only(w, h);
    for (int k = 0; k < w * h; ++k) {
      if (label[k] == l) only.set(k % w, k / w);
    }
    const std::vector<std::uint8_t> out = outer_background(only);
    std::int64_t area = 0;
    for (auto o : out) area += o ? 0 : 1;
    result.push_back({l, area});
  }
  return result;
}

}  // namespace nanoseg::testing
