#include "../internal.hpp"

namespace nanoseg::reference {

namespace {

BinaryMask erode_once(const BinaryMask& m, StructuringElement se) {
  const int rx = se.width / 2;
  const int ry = se.height / 2;
  BinaryMask out(m.width(), m.height());
  for (int y = 0; y < m.height(); ++y) {
    for (int x = 0; x < m.width(); ++x) {
      bool all = true;
      for (int dy = -ry; dy <= ry && all; ++dy) {
        for (int dx = -rx; dx <= rx && all; ++dx) {
          all = m.in_bounds(x + dx, y + dy) && m.test(x + dx, y + dy);
        }
      }
      out.set(x, y, all);
    }
  }
  return out;
}

BinaryMask dilate_once(const BinaryMask& m, StructuringElement se) {
  const int rx = se.width / 2;
  const int ry = se.height / 2;
  BinaryMask out(m.width(), m.height());
  for (int y = 0; y < m.height(); ++y) {
    for (int x = 0; x < m.width(); ++x) {
      bool any = false;
      for (int dy = -ry; dy <= ry && !any; ++dy) {
        for (int dx = -rx; dx <= rx && !any; ++dx) {
          any = m.in_bounds(x + dx, y + dy) && m.test(x + dx, y + dy);
        }
      }
      out.set(x, y, any);
    }
  }
  return out;
}

}  // namespace

BinaryMask erode(const BinaryMask& mask, StructuringElement se, int iterations) {
  detail::validate_morphology(se, iterations);
  BinaryMask m = mask;
  for (int i = 0; i < iterations; ++i) m = erode_once(m, se);
  return m;
}

BinaryMask dilate(const BinaryMask& mask, StructuringElement se, int iterations) {
  detail::validate_morphology(se, iterations);
  BinaryMask m = mask;
  for (int i = 0; i < iterations; ++i) m = dilate_once(m, se);
  return m;
}

BinaryMask open_op(const BinaryMask& mask, StructuringElement se, int iterations) {
  return reference::dilate(reference::erode(mask, se, iterations), se, iterations);
}

BinaryMask close_op(const BinaryMask& mask, StructuringElement se, int iterations) {
  return reference::erode(reference::dilate(mask, se, iterations), se, iterations);
}

}  // namespace nanoseg::reference
