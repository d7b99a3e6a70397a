#include <algorithm>
#include <vector>

#include "../internal.hpp"
#include "../kernel_util.hpp"

namespace nanoseg::reference {

GrayImage smooth(const GrayImage& img, SmoothingKind kind) {
  detail::validate_smoothing(img, kind);
  if (kind.method == SmoothingMethod::None) return img;

  const int w = img.width();
  const int h = img.height();
  const int k = kind.kernel_size;
  const int r = k / 2;
  const auto row = detail::binomial_row(k);
  GrayImage out(w, h);

  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      std::vector<int> window;
      std::int64_t weighted = 0;
      std::int64_t total = 0;
      for (int dy = -r; dy <= r; ++dy) {
        for (int dx = -r; dx <= r; ++dx) {
          const int v = img(detail::clamp_index(x + dx, w), detail::clamp_index(y + dy, h));
          const std::int64_t wt =
              kind.method == SmoothingMethod::Gaussian ? row[dx + r] * row[dy + r] : 1;
          weighted += wt * v;
          total += wt;
          window.push_back(v);
        }
      }
      if (kind.method == SmoothingMethod::Median) {
        std::sort(window.begin(), window.end());
        out(x, y) = static_cast<std::uint8_t>(window[(window.size() - 1) / 2]);
      } else {
        out(x, y) = static_cast<std::uint8_t>(detail::round_half_up(weighted, total));
      }
    }
  }
  return out;
}

GrayImage equalize_histogram(const GrayImage& img) {
  std::vector<std::int64_t> cdf(256, 0);
  for (std::uint8_t v : img.pixels()) ++cdf[v];
  for (int v = 1; v < 256; ++v) cdf[v] += cdf[v - 1];
  const auto n = static_cast<std::int64_t>(img.size());
  const std::int64_t cdf_min = *std::find_if(cdf.begin(), cdf.end(), [](auto c) { return c > 0; });
  if (n == cdf_min) return img;

  GrayImage out(img.width(), img.height());
  for (int y = 0; y < img.height(); ++y) {
    for (int x = 0; x < img.width(); ++x) {
      const std::int64_t c = cdf[img(x, y)];
      out(x, y) = static_cast<std::uint8_t>(detail::round_half_up(255 * (c - cdf_min), n - cdf_min));
    }
  }
  return out;
}

}  // namespace nanoseg::reference
