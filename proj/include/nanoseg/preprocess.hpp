#pragma once

#include <array>
#include <cstdint>

#include "nanoseg/image.hpp"

namespace nanoseg {

enum class SmoothingMethod { None, Mean, Gaussian, Median };

/// Filter choice plus its square kernel side. `None` ignores kernel_size.
struct SmoothingKind {
  SmoothingMethod method = SmoothingMethod::Gaussian;
  int kernel_size = 3;
  bool operator==(const SmoothingKind&) const = default;
};

/// Smooths with replicate border padding and half-up rounding.
///
/// Mean is the k x k window average, Gaussian convolves with the outer
/// product of the (k-1)-th binomial row, Median takes the window median.
/// Throws std::invalid_argument for even kernels, kernels above
/// 2 * min(width, height) + 1, or binomial kernels too large for exact
/// 64-bit arithmetic (k > 27).
GrayImage smooth(const GrayImage& img, SmoothingKind kind);

/// Gray-level mapping used by equalize_histogram.
std::array<std::uint8_t, 256> equalization_lut(const GrayImage& img);

/// Global histogram equalization. A single-level image is returned unchanged.
GrayImage equalize_histogram(const GrayImage& img);

namespace reference {

// Serial, window-by-window evaluation of the same definitions.
GrayImage smooth(const GrayImage& img, SmoothingKind kind);
GrayImage equalize_histogram(const GrayImage& img);

}  // namespace reference

}  // namespace nanoseg
