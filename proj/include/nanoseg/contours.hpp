#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "nanoseg/image.hpp"

namespace nanoseg {

/// Outer boundary of one 8-connected foreground component.
///
/// `points` is a closed loop of 8-adjacent pixels traced counterclockwise
/// (on screen) from the component's topmost-leftmost pixel. Thin parts are
/// visited once per side, so points may repeat. `filled_area` and the
/// centroid cover everything the boundary encloses, holes included.
struct Contour {
  std::vector<Point> points;
  std::int64_t filled_area = 0;
  Rect bbox;
  double centroid_x = 0.0;
  double centroid_y = 0.0;

  [[nodiscard]] bool touches_border(int width, int height) const {
    return bbox.origin.x == 0 || bbox.origin.y == 0 || bbox.right() == width ||
           bbox.bottom() == height;
  }
};

/// Minimal-area rule: keep contours with
/// filled_area >= max(absolute_min, relative_fraction * largest filled_area).
struct AreaPolicy {
  std::int64_t absolute_min = 5;
  double relative_fraction = 0.05;
  bool operator==(const AreaPolicy&) const = default;
};

/// One contour per top-level component (foreground 8-connected, background
/// 4-connected). Components sitting inside another component's hole are not
/// reported. Ordered by each component's first pixel in raster order.
std::vector<Contour> find_outer_contours(const BinaryMask& mask);

/// Builds a Contour from a traced loop, computing bbox, filled area and centroid.
Contour make_contour(std::vector<Point> points);

std::vector<Contour> filter_min_area(std::span<const Contour> contours, const AreaPolicy& policy);

/// Full-size raster with the boundary and every enclosed pixel set: a pixel
/// is enclosed when no 4-connected background path joins it to the border.
/// Throws std::out_of_range if a point falls outside width x height.
BinaryMask rasterize_and_fill(const Contour& contour, int width, int height);

/// Same fill restricted to the contour's bounding box; pixel (0,0) of the
/// result corresponds to contour.bbox.origin.
BinaryMask fill_within_bbox(const Contour& contour);

/// Grayscale copied to RGB with every boundary pixel painted (255, 0, 0).
RgbImage render_overlay(const GrayImage& img, std::span<const Contour> contours);

}  // namespace nanoseg
