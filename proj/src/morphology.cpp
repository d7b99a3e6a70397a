#include "nanoseg/morphology.hpp"

#include <algorithm>
#include <cstdint>
#include <string>

#include "internal.hpp"
#include "kernel_util.hpp"

namespace nanoseg {

namespace detail {

void validate_morphology(StructuringElement se, int iterations) {
  require_odd_kernel(se.width, 1, "structuring element width");
  require_odd_kernel(se.height, 1, "structuring element height");
  if (iterations < 1) {
    throw std::invalid_argument("morphology iterations must be >= 1, got " +
                                std::to_string(iterations));
  }
}

}  // namespace detail

namespace {

// A rectangle decomposes into a horizontal then a vertical line pass. With
// out-of-bounds treated as background, erosion clears any pixel whose line
// window leaves the raster, and dilation simply ignores the missing pixels.
template <bool kErode>
void line_pass_horizontal(const BinaryMask& src, BinaryMask& dst, int radius) {
  const int w = src.width();
  const int h = src.height();
#pragma omp parallel for schedule(static)
  for (int y = 0; y < h; ++y) {
    const std::uint8_t* in = src.row(y);
    std::uint8_t* out = dst.row(y);
    for (int x = 0; x < w; ++x) {
      const int lo = x - radius;
      const int hi = x + radius;
      std::uint8_t v;
      if constexpr (kErode) {
        if (lo < 0 || hi >= w) {
          v = BinaryMask::kOff;
        } else {
          v = BinaryMask::kOn;
          for (int i = lo; i <= hi; ++i) v &= in[i];
        }
      } else {
        v = BinaryMask::kOff;
        for (int i = std::max(lo, 0); i <= std::min(hi, w - 1); ++i) v |= in[i];
      }
      out[x] = v;
    }
  }
}

template <bool kErode>
void line_pass_vertical(const BinaryMask& src, BinaryMask& dst, int radius) {
  const int w = src.width();
  const int h = src.height();
#pragma omp parallel for schedule(static)
  for (int y = 0; y < h; ++y) {
    std::uint8_t* out = dst.row(y);
    const int lo = y - radius;
    const int hi = y + radius;
    if constexpr (kErode) {
      if (lo < 0 || hi >= h) {
        std::fill(out, out + w, BinaryMask::kOff);
        continue;
      }
      std::fill(out, out + w, BinaryMask::kOn);
      for (int j = lo; j <= hi; ++j) {
        const std::uint8_t* in = src.row(j);
        for (int x = 0; x < w; ++x) out[x] &= in[x];
      }
    } else {
      std::fill(out, out + w, BinaryMask::kOff);
      for (int j = std::max(lo, 0); j <= std::min(hi, h - 1); ++j) {
        const std::uint8_t* in = src.row(j);
        for (int x = 0; x < w; ++x) out[x] |= in[x];
      }
    }
  }
}

template <bool kErode>
BinaryMask apply(const BinaryMask& mask, StructuringElement se, int iterations) {
  BinaryMask cur = mask;
  BinaryMask tmp(mask.width(), mask.height());
  const int rx = se.width / 2;
  const int ry = se.height / 2;
  for (int it = 0; it < iterations; ++it) {
    if (rx > 0) {
      line_pass_horizontal<kErode>(cur, tmp, rx);
      std::swap(cur, tmp);
    }
    if (ry > 0) {
      line_pass_vertical<kErode>(cur, tmp, ry);
      std::swap(cur, tmp);
    }
  }
  return cur;
}

}  // namespace

BinaryMask erode(const BinaryMask& mask, StructuringElement se, int iterations) {
  detail::validate_morphology(se, iterations);
  return apply<true>(mask, se, iterations);
}

BinaryMask dilate(const BinaryMask& mask, StructuringElement se, int iterations) {
  detail::validate_morphology(se, iterations);
  return apply<false>(mask, se, iterations);
}

BinaryMask open_op(const BinaryMask& mask, StructuringElement se, int iterations) {
  return dilate(erode(mask, se, iterations), se, iterations);
}

BinaryMask close_op(const BinaryMask& mask, StructuringElement se, int iterations) {
  return erode(dilate(mask, se, iterations), se, iterations);
}

}  // namespace nanoseg
