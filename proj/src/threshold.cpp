#include "nanoseg/threshold.hpp"

#include <cstddef>
#include <vector>

#include "internal.hpp"
#include "kernel_util.hpp"

namespace nanoseg {

namespace detail {

void validate_adaptive(const AdaptiveParams& params) {
  require_odd_kernel(params.block, 3, "adaptive block");
  if (params.weighting == Weighting::Gaussian && params.block > kMaxBinomialKernel) {
    throw std::invalid_argument("Gaussian adaptive block above " +
                                std::to_string(kMaxBinomialKernel) + " is not supported");
  }
  if (params.offset_d < -255 || params.offset_d > 255) {
    throw std::invalid_argument("adaptive offset_d must lie in [-255, 255]");
  }
}

}  // namespace detail

BinaryMask binary_threshold(const GrayImage& img, int t) {
  BinaryMask out(img.width(), img.height());
  auto src = img.pixels();
  auto dst = out.pixels();
  const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(dst.size());
#pragma omp parallel for simd schedule(static) if (n > (1 << 16))
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    dst[i] = src[i] > t ? BinaryMask::kOn : BinaryMask::kOff;
  }
  return out;
}

BinaryMask adaptive_threshold(const GrayImage& img, const AdaptiveParams& params) {
  detail::validate_adaptive(params);
  const int w = img.width();
  const int h = img.height();
  const int r = params.block / 2;
  const std::vector<std::int64_t> weights =
      params.weighting == Weighting::Mean
          ? std::vector<std::int64_t>(static_cast<std::size_t>(params.block), 1)
          : detail::binomial_row(params.block);
  std::int64_t total = 0;
  for (auto wt : weights) total += wt;
  total *= total;
  const std::int64_t offset = static_cast<std::int64_t>(params.offset_d) * total;

  // Horizontal pass, then a vertical pass fused with the comparison.
  std::vector<std::int64_t> horiz(static_cast<std::size_t>(w) * h);
#pragma omp parallel for schedule(static)
  for (int y = 0; y < h; ++y) {
    const std::uint8_t* src = img.row(y);
    std::int64_t* dst = horiz.data() + static_cast<std::size_t>(y) * w;
    for (int x = 0; x < w; ++x) {
      std::int64_t acc = 0;
      if (x >= r && x + r < w) {
        for (int i = -r; i <= r; ++i) acc += weights[i + r] * src[x + i];
      } else {
        for (int i = -r; i <= r; ++i) acc += weights[i + r] * src[detail::clamp_index(x + i, w)];
      }
      dst[x] = acc;
    }
  }

  BinaryMask out(w, h);
#pragma omp parallel
  {
    std::vector<std::int64_t> acc(static_cast<std::size_t>(w));
#pragma omp for schedule(static)
    for (int y = 0; y < h; ++y) {
      std::fill(acc.begin(), acc.end(), 0);
      for (int i = -r; i <= r; ++i) {
        const std::int64_t* src =
            horiz.data() + static_cast<std::size_t>(detail::clamp_index(y + i, h)) * w;
        const std::int64_t wt = weights[i + r];
        for (int x = 0; x < w; ++x) acc[x] += wt * src[x];
      }
      const std::uint8_t* pix = img.row(y);
      std::uint8_t* dst = out.row(y);
      for (int x = 0; x < w; ++x) {
        dst[x] = pix[x] * total > acc[x] - offset ? BinaryMask::kOn : BinaryMask::kOff;
      }
    }
  }
  return out;
}

}  // namespace nanoseg
