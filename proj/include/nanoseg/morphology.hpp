#pragma once

#include "nanoseg/image.hpp"

namespace nanoseg {

/// Fully set rectangular structuring element anchored at its center.
struct StructuringElement {
  int width = 3;   // odd, >= 1
  int height = 3;  // odd, >= 1
  bool operator==(const StructuringElement&) const = default;
};

// Pixels outside the raster count as background for every operation.
// `iterations` >= 1; open/close apply the whole erode (or dilate) chain
// before the dilate (or erode) chain.
BinaryMask erode(const BinaryMask& mask, StructuringElement se, int iterations = 1);
BinaryMask dilate(const BinaryMask& mask, StructuringElement se, int iterations = 1);
BinaryMask open_op(const BinaryMask& mask, StructuringElement se, int iterations = 1);
BinaryMask close_op(const BinaryMask& mask, StructuringElement se, int iterations = 1);

namespace reference {

BinaryMask erode(const BinaryMask& mask, StructuringElement se, int iterations = 1);
BinaryMask dilate(const BinaryMask& mask, StructuringElement se, int iterations = 1);
BinaryMask open_op(const BinaryMask& mask, StructuringElement se, int iterations = 1);
BinaryMask close_op(const BinaryMask& mask, StructuringElement se, int iterations = 1);

}  // namespace reference

}  // namespace nanoseg
