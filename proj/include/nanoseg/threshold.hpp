#pragma once

#include "nanoseg/image.hpp"

namespace nanoseg {

enum class Weighting { Mean, Gaussian };

/// Neighborhood threshold parameters: a pixel is foreground when it is
/// strictly brighter than its weighted block mean minus `offset_d`.
struct AdaptiveParams {
  int block = 11;      // odd side length >= 3
  int offset_d = 2;    // subtracted from the neighborhood mean; may be negative
  Weighting weighting = Weighting::Mean;
  bool operator==(const AdaptiveParams&) const = default;
};

/// 255 where img > t, else 0.
BinaryMask binary_threshold(const GrayImage& img, int t);

/// Adaptive threshold with replicate padding. The weighted mean M(p) is
/// never rounded: the test img(p) > M(p) - D is evaluated as
/// img(p) * W > sum(w_i * p_i) - D * W over integers, W = sum of weights.
/// Throws std::invalid_argument for even or too-small blocks, and for
/// Gaussian blocks above 27.
BinaryMask adaptive_threshold(const GrayImage& img, const AdaptiveParams& params);

namespace reference {

BinaryMask binary_threshold(const GrayImage& img, int t);
BinaryMask adaptive_threshold(const GrayImage& img, const AdaptiveParams& params);

}  // namespace reference

}  // namespace nanoseg
