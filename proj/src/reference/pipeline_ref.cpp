#include "nanoseg/pipeline.hpp"

namespace nanoseg::reference {

BinaryMask superpose_closed_particles(std::span<const Contour> contours, int width, int height,
                                      StructuringElement close_se, int close_iters) {
  BinaryMask merged(width, height);
  for (const Contour& c : contours) {
    const BinaryMask single = rasterize_and_fill(c, width, height);
    bitwise_or_into(merged, reference::close_op(single, close_se, close_iters));
  }
  return merged;
}

}  // namespace nanoseg::reference
