#include "nanoseg/image.hpp"

#include <algorithm>
#include <string>

namespace nanoseg {
namespace detail {

namespace {

void check_dimensions(int width, int height) {
  if (width < 1 || height < 1) {
    throw std::invalid_argument("raster dimensions must be >= 1, got " +
                                std::to_string(width) + "x" + std::to_string(height));
  }
}

}  // namespace

Raster8::Raster8(int width, int height, std::uint8_t fill)
    : width_(width), height_(height) {
  check_dimensions(width, height);
  data_.assign(static_cast<std::size_t>(width) * height, fill);
}

Raster8::Raster8(int width, int height, std::vector<std::uint8_t> data)
    : width_(width), height_(height), data_(std::move(data)) {
  check_dimensions(width, height);
  if (data_.size() != static_cast<std::size_t>(width) * height) {
    throw std::invalid_argument("raster data length " + std::to_string(data_.size()) +
                                " does not match " + std::to_string(width) + "x" +
                                std::to_string(height));
  }
}

}  // namespace detail

BinaryMask::BinaryMask(int width, int height, std::vector<std::uint8_t> data)
    : Raster8(width, height, std::move(data)) {
  for (std::uint8_t v : data_) {
    if (v != kOff && v != kOn) {
      throw std::invalid_argument("binary mask value " + std::to_string(v) +
                                  " is not 0 or 255");
    }
  }
}

std::int64_t BinaryMask::count() const {
  return std::count(data_.begin(), data_.end(), kOn);
}

RgbImage::RgbImage(int width, int height) : width_(width), height_(height) {
  if (width < 1 || height < 1) {
    throw std::invalid_argument("raster dimensions must be >= 1");
  }
  data_.assign(static_cast<std::size_t>(width) * height * 3, 0);
}

RgbImage::Pixel RgbImage::at(int x, int y) const {
  const std::size_t i = (static_cast<std::size_t>(y) * width_ + x) * 3;
  return {data_[i], data_[i + 1], data_[i + 2]};
}

void RgbImage::set(int x, int y, Pixel p) {
  const std::size_t i = (static_cast<std::size_t>(y) * width_ + x) * 3;
  data_[i] = p.r;
  data_[i + 1] = p.g;
  data_[i + 2] = p.b;
}

namespace {

void require_same_size(const BinaryMask& a, const BinaryMask& b, const char* op) {
  if (a.width() != b.width() || a.height() != b.height()) {
    throw std::invalid_argument(std::string(op) + ": dimension mismatch " +
                                std::to_string(a.width()) + "x" + std::to_string(a.height()) +
                                " vs " + std::to_string(b.width()) + "x" +
                                std::to_string(b.height()));
  }
}

}  // namespace

BinaryMask bitwise_and(const BinaryMask& a, const BinaryMask& b) {
  require_same_size(a, b, "bitwise_and");
  BinaryMask out(a.width(), a.height());
  auto pa = a.pixels();
  auto pb = b.pixels();
  auto po = out.pixels();
  const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(po.size());
#pragma omp parallel for simd schedule(static) if (n > (1 << 16))
  for (std::ptrdiff_t i = 0; i < n; ++i) po[i] = pa[i] & pb[i];
  return out;
}

BinaryMask bitwise_or(const BinaryMask& a, const BinaryMask& b) {
  BinaryMask out = a;
  bitwise_or_into(out, b);
  return out;
}

void bitwise_or_into(BinaryMask& dst, const BinaryMask& src) {
  require_same_size(dst, src, "bitwise_or");
  auto pd = dst.pixels();
  auto ps = src.pixels();
  const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(pd.size());
#pragma omp parallel for simd schedule(static) if (n > (1 << 16))
  for (std::ptrdiff_t i = 0; i < n; ++i) pd[i] |= ps[i];
}

BinaryMask complement(const BinaryMask& m) {
  BinaryMask out(m.width(), m.height());
  auto pm = m.pixels();
  auto po = out.pixels();
  for (std::size_t i = 0; i < po.size(); ++i) po[i] = pm[i] ^ BinaryMask::kOn;
  return out;
}

bool is_subset(const BinaryMask& inner, const BinaryMask& outer) {
  require_same_size(inner, outer, "is_subset");
  auto pi = inner.pixels();
  auto po = outer.pixels();
  for (std::size_t i = 0; i < pi.size(); ++i) {
    if (pi[i] && !po[i]) return false;
  }
  return true;
}

}  // namespace nanoseg
