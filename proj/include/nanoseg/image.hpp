#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace nanoseg {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Point {
  int x = 0;  // column
  int y = 0;  // row
  auto operator<=>(const Point&) const = default;
};

struct Rect {
  Point origin;
  int width = 0;
  int height = 0;

  [[nodiscard]] int right() const { return origin.x + width; }    // exclusive
  [[nodiscard]] int bottom() const { return origin.y + height; }  // exclusive
  [[nodiscard]] std::int64_t area() const {
    return static_cast<std::int64_t>(width) * height;
  }
  [[nodiscard]] bool contains(Point p) const {
    return p.x >= origin.x && p.x < right() && p.y >= origin.y && p.y < bottom();
  }
  bool operator==(const Rect&) const = default;
};

namespace detail {

/// Row-major 8-bit single-channel storage shared by GrayImage and BinaryMask.
class Raster8 {
 public:
  Raster8() = default;
  Raster8(int width, int height, std::uint8_t fill);
  Raster8(int width, int height, std::vector<std::uint8_t> data);

  [[nodiscard]] int width() const { return width_; }
  [[nodiscard]] int height() const { return height_; }
  [[nodiscard]] std::size_t size() const { return data_.size(); }
  [[nodiscard]] bool in_bounds(int x, int y) const {
    return x >= 0 && y >= 0 && x < width_ && y < height_;
  }

  [[nodiscard]] std::uint8_t operator()(int x, int y) const {
    return data_[index(x, y)];
  }
  [[nodiscard]] std::span<const std::uint8_t> pixels() const { return data_; }
  [[nodiscard]] const std::uint8_t* row(int y) const {
    return data_.data() + static_cast<std::size_t>(y) * width_;
  }

 protected:
  [[nodiscard]] std::size_t index(int x, int y) const {
    return static_cast<std::size_t>(y) * width_ + x;
  }

  int width_ = 0;
  int height_ = 0;
  std::vector<std::uint8_t> data_;
};

}  // namespace detail

/// 8-bit grayscale raster, row-major, width and height >= 1.
class GrayImage : public detail::Raster8 {
 public:
  GrayImage() = default;
  GrayImage(int width, int height, std::uint8_t fill = 0)
      : Raster8(width, height, fill) {}
  GrayImage(int width, int height, std::vector<std::uint8_t> data)
      : Raster8(width, height, std::move(data)) {}

  using Raster8::operator();
  std::uint8_t& operator()(int x, int y) { return data_[index(x, y)]; }
  using Raster8::pixels;
  std::span<std::uint8_t> pixels() { return data_; }
  using Raster8::row;
  std::uint8_t* row(int y) { return data_.data() + static_cast<std::size_t>(y) * width_; }

  bool operator==(const GrayImage& other) const {
    return width_ == other.width_ && height_ == other.height_ && data_ == other.data_;
  }
};

/// Raster whose every value is exactly 0 (background) or 255 (foreground).
///
/// Mutable raw access is exposed for the kernels; they only ever store
/// kOff or kOn. Construction from external bytes validates the invariant.
class BinaryMask : public detail::Raster8 {
 public:
  static constexpr std::uint8_t kOff = 0;
  static constexpr std::uint8_t kOn = 255;

  BinaryMask() = default;
  BinaryMask(int width, int height, bool on = false)
      : Raster8(width, height, on ? kOn : kOff) {}
  /// Throws std::invalid_argument if any byte is outside {0, 255}.
  BinaryMask(int width, int height, std::vector<std::uint8_t> data);

  [[nodiscard]] bool test(int x, int y) const { return (*this)(x, y) != kOff; }
  void set(int x, int y, bool on = true) { data_[index(x, y)] = on ? kOn : kOff; }

  using Raster8::pixels;
  std::span<std::uint8_t> pixels() { return data_; }
  using Raster8::row;
  std::uint8_t* row(int y) { return data_.data() + static_cast<std::size_t>(y) * width_; }

  [[nodiscard]] std::int64_t count() const;
  [[nodiscard]] bool empty() const { return count() == 0; }

  bool operator==(const BinaryMask& other) const {
    return width_ == other.width_ && height_ == other.height_ && data_ == other.data_;
  }
};

/// Interleaved 8-bit RGB raster used for overlays.
class RgbImage {
 public:
  struct Pixel {
    std::uint8_t r = 0, g = 0, b = 0;
    bool operator==(const Pixel&) const = default;
  };

  RgbImage() = default;
  RgbImage(int width, int height);

  [[nodiscard]] int width() const { return width_; }
  [[nodiscard]] int height() const { return height_; }
  [[nodiscard]] Pixel at(int x, int y) const;
  void set(int x, int y, Pixel p);
  [[nodiscard]] std::span<const std::uint8_t> bytes() const { return data_; }

  bool operator==(const RgbImage&) const = default;

 private:
  int width_ = 0;
  int height_ = 0;
  std::vector<std::uint8_t> data_;
};

/// Pixelwise AND; throws std::invalid_argument on dimension mismatch.
BinaryMask bitwise_and(const BinaryMask& a, const BinaryMask& b);
/// Pixelwise OR; throws std::invalid_argument on dimension mismatch.
BinaryMask bitwise_or(const BinaryMask& a, const BinaryMask& b);
/// In-place OR of `src` into `dst`.
void bitwise_or_into(BinaryMask& dst, const BinaryMask& src);
BinaryMask complement(const BinaryMask& m);

/// True when every foreground pixel of `inner` is foreground in `outer`.
bool is_subset(const BinaryMask& inner, const BinaryMask& outer);

}  // namespace nanoseg
