#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "nanoseg/image.hpp"

namespace nanoseg {

enum class PgmErrorKind {
  BadMagic,
  MalformedHeader,
  ZeroDimension,
  MaxvalOutOfRange,
  TruncatedPayload,
  SampleOutOfRange,
};

const char* to_string(PgmErrorKind kind);

/// Decoding failure, tagged with the byte offset where it was detected.
class PgmError : public Error {
 public:
  PgmError(PgmErrorKind kind, std::size_t offset, const std::string& detail);

  [[nodiscard]] PgmErrorKind kind() const { return kind_; }
  [[nodiscard]] std::size_t offset() const { return offset_; }

 private:
  PgmErrorKind kind_;
  std::size_t offset_;
};

struct PgmData {
  GrayImage image;
  int maxval = 255;
};

/// Decodes binary (P5) or ASCII (P2) PGM with maxval <= 255.
/// Sample values are returned as stored; they are not rescaled to 255.
PgmData decode_pgm_with_maxval(std::span<const std::uint8_t> bytes);
GrayImage decode_pgm(std::span<const std::uint8_t> bytes);

/// Binary P5 encoding. `maxval` must be in [1, 255] and bound every sample.
std::vector<std::uint8_t> encode_pgm(const GrayImage& img, int maxval = 255);
std::vector<std::uint8_t> encode_pgm(const BinaryMask& mask);

/// Binary P6 encoding with maxval 255.
std::vector<std::uint8_t> encode_ppm(const RgbImage& img);

std::vector<std::uint8_t> read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::span<const std::uint8_t> bytes);

inline GrayImage read_pgm(const std::filesystem::path& path) {
  return decode_pgm(read_file(path));
}

}  // namespace nanoseg
