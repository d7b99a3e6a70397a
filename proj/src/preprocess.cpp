#include "nanoseg/preprocess.hpp"

#include <algorithm>
#include <cstddef>
#include <vector>

#include "internal.hpp"
#include "kernel_util.hpp"

namespace nanoseg {

namespace detail {

void validate_smoothing(const GrayImage& img, SmoothingKind kind) {
  if (kind.method == SmoothingMethod::None) return;
  require_odd_kernel(kind.kernel_size, 3, "smoothing kernel_size");
  const int limit = 2 * std::min(img.width(), img.height()) + 1;
  if (kind.kernel_size > limit) {
    throw std::invalid_argument("smoothing kernel_size " + std::to_string(kind.kernel_size) +
                                " exceeds 2*min(width,height)+1 = " + std::to_string(limit));
  }
  if (kind.method == SmoothingMethod::Gaussian && kind.kernel_size > kMaxBinomialKernel) {
    throw std::invalid_argument("Gaussian kernel_size above " +
                                std::to_string(kMaxBinomialKernel) + " is not supported");
  }
}

}  // namespace detail

namespace {

using detail::clamp_index;

// Separable weighted sum with replicate padding; result is exact.
std::vector<std::int64_t> separable_sum(const GrayImage& img,
                                        const std::vector<std::int64_t>& weights) {
  const int w = img.width();
  const int h = img.height();
  const int r = static_cast<int>(weights.size() / 2);
  std::vector<std::int64_t> horiz(static_cast<std::size_t>(w) * h);
  std::vector<std::int64_t> out(horiz.size());

#pragma omp parallel for schedule(static)
  for (int y = 0; y < h; ++y) {
    const std::uint8_t* src = img.row(y);
    std::int64_t* dst = horiz.data() + static_cast<std::size_t>(y) * w;
    for (int x = 0; x < w; ++x) {
      std::int64_t acc = 0;
      if (x >= r && x + r < w) {
        for (int i = -r; i <= r; ++i) acc += weights[i + r] * src[x + i];
      } else {
        for (int i = -r; i <= r; ++i) acc += weights[i + r] * src[clamp_index(x + i, w)];
      }
      dst[x] = acc;
    }
  }

#pragma omp parallel for schedule(static)
  for (int y = 0; y < h; ++y) {
    std::int64_t* dst = out.data() + static_cast<std::size_t>(y) * w;
    std::fill(dst, dst + w, 0);
    for (int i = -r; i <= r; ++i) {
      const std::int64_t* src =
          horiz.data() + static_cast<std::size_t>(clamp_index(y + i, h)) * w;
      const std::int64_t wt = weights[i + r];
      for (int x = 0; x < w; ++x) dst[x] += wt * src[x];
    }
  }
  return out;
}

GrayImage median_filter(const GrayImage& img, int k) {
  const int w = img.width();
  const int h = img.height();
  const int r = k / 2;
  const int mid = (k * k - 1) / 2;  // k*k is odd, so this is the exact median
  GrayImage out(w, h);

#pragma omp parallel
  {
    std::vector<std::uint8_t> window(static_cast<std::size_t>(k) * k);
#pragma omp for schedule(static)
    for (int y = 0; y < h; ++y) {
      for (int x = 0; x < w; ++x) {
        std::size_t n = 0;
        for (int dy = -r; dy <= r; ++dy) {
          const std::uint8_t* src = img.row(clamp_index(y + dy, h));
          for (int dx = -r; dx <= r; ++dx) window[n++] = src[clamp_index(x + dx, w)];
        }
        std::nth_element(window.begin(), window.begin() + mid, window.end());
        out(x, y) = window[mid];
      }
    }
  }
  return out;
}

}  // namespace

GrayImage smooth(const GrayImage& img, SmoothingKind kind) {
  detail::validate_smoothing(img, kind);
  const int k = kind.kernel_size;
  switch (kind.method) {
    case SmoothingMethod::None:
      return img;
    case SmoothingMethod::Median:
      return median_filter(img, k);
    case SmoothingMethod::Mean:
    case SmoothingMethod::Gaussian: {
      const auto weights = kind.method == SmoothingMethod::Mean
                               ? std::vector<std::int64_t>(static_cast<std::size_t>(k), 1)
                               : detail::binomial_row(k);
      std::int64_t total = 0;
      for (auto wt : weights) total += wt;
      total *= total;
      const auto sums = separable_sum(img, weights);
      GrayImage out(img.width(), img.height());
      auto dst = out.pixels();
      const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(dst.size());
#pragma omp parallel for schedule(static)
      for (std::ptrdiff_t i = 0; i < n; ++i) {
        dst[i] = static_cast<std::uint8_t>(detail::round_half_up(sums[i], total));
      }
      return out;
    }
  }
  return img;
}

std::array<std::uint8_t, 256> equalization_lut(const GrayImage& img) {
  std::array<std::int64_t, 256> hist{};
  for (std::uint8_t v : img.pixels()) ++hist[v];

  std::array<std::uint8_t, 256> lut{};
  const auto total = static_cast<std::int64_t>(img.size());
  std::int64_t cdf_min = 0;
  for (auto c : hist) {
    if (c != 0) {
      cdf_min = c;
      break;
    }
  }
  const std::int64_t den = total - cdf_min;
  std::int64_t cdf = 0;
  for (int v = 0; v < 256; ++v) {
    cdf += hist[v];
    if (den == 0) {
      lut[v] = static_cast<std::uint8_t>(v);
    } else if (cdf <= cdf_min) {
      lut[v] = 0;
    } else {
      lut[v] = static_cast<std::uint8_t>(detail::round_half_up(255 * (cdf - cdf_min), den));
    }
  }
  return lut;
}

GrayImage equalize_histogram(const GrayImage& img) {
  const auto lut = equalization_lut(img);
  GrayImage out(img.width(), img.height());
  auto src = img.pixels();
  auto dst = out.pixels();
  const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(dst.size());
#pragma omp parallel for schedule(static) if (n > (1 << 16))
  for (std::ptrdiff_t i = 0; i < n; ++i) dst[i] = lut[src[i]];
  return out;
}

}  // namespace nanoseg
