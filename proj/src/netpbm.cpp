#include "nanoseg/netpbm.hpp"

#include <fstream>
#include <limits>
#include <string>

namespace nanoseg {

const char* to_string(PgmErrorKind kind) {
  switch (kind) {
    case PgmErrorKind::BadMagic: return "BadMagic";
    case PgmErrorKind::MalformedHeader: return "MalformedHeader";
    case PgmErrorKind::ZeroDimension: return "ZeroDimension";
    case PgmErrorKind::MaxvalOutOfRange: return "MaxvalOutOfRange";
    case PgmErrorKind::TruncatedPayload: return "TruncatedPayload";
    case PgmErrorKind::SampleOutOfRange: return "SampleOutOfRange";
  }
  return "Unknown";
}

PgmError::PgmError(PgmErrorKind kind, std::size_t offset, const std::string& detail)
    : Error(std::string("PGM ") + to_string(kind) + " at byte " + std::to_string(offset) +
            ": " + detail),
      kind_(kind),
      offset_(offset) {}

namespace {

bool is_space(std::uint8_t c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\v' || c == '\f';
}

class Reader {
 public:
  explicit Reader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

  [[nodiscard]] std::size_t pos() const { return pos_; }
  [[nodiscard]] bool at_end() const { return pos_ >= bytes_.size(); }
  [[nodiscard]] std::size_t remaining() const { return bytes_.size() - pos_; }
  std::uint8_t peek() const { return bytes_[pos_]; }
  std::uint8_t next() { return bytes_[pos_++]; }

  // Whitespace and '#' comments are allowed between header tokens.
  void skip_space_and_comments() {
    while (!at_end()) {
      if (is_space(peek())) {
        ++pos_;
      } else if (peek() == '#') {
        while (!at_end() && peek() != '\n' && peek() != '\r') ++pos_;
      } else {
        break;
      }
    }
  }

  /// Reads an unsigned decimal; `kind` is raised for a missing token.
  long read_uint(PgmErrorKind kind, const char* what) {
    skip_space_and_comments();
    const std::size_t start = pos_;
    if (at_end()) throw PgmError(kind, pos_, std::string("missing ") + what);
    if (peek() < '0' || peek() > '9') {
      throw PgmError(PgmErrorKind::MalformedHeader, pos_,
                     std::string("expected digit for ") + what);
    }
    long value = 0;
    while (!at_end() && peek() >= '0' && peek() <= '9') {
      value = value * 10 + (next() - '0');
      if (value > std::numeric_limits<int>::max()) {
        throw PgmError(PgmErrorKind::MalformedHeader, start, std::string(what) + " too large");
      }
    }
    if (!at_end() && !is_space(peek()) && peek() != '#') {
      throw PgmError(PgmErrorKind::MalformedHeader, pos_,
                     std::string("unexpected byte after ") + what);
    }
    return value;
  }

 private:
  std::span<const std::uint8_t> bytes_;
  std::size_t pos_ = 0;
};

}  // namespace

PgmData decode_pgm_with_maxval(std::span<const std::uint8_t> bytes) {
  Reader in(bytes);
  if (bytes.size() < 2 || bytes[0] != 'P' || (bytes[1] != '2' && bytes[1] != '5')) {
    throw PgmError(PgmErrorKind::BadMagic, 0, "expected P2 or P5");
  }
  const bool binary = bytes[1] == '5';
  in.next();
  in.next();
  if (in.at_end() || (!is_space(in.peek()) && in.peek() != '#')) {
    throw PgmError(PgmErrorKind::MalformedHeader, in.pos(), "no separator after magic");
  }

  const std::size_t width_at = in.pos();
  const long width = in.read_uint(PgmErrorKind::MalformedHeader, "width");
  const long height = in.read_uint(PgmErrorKind::MalformedHeader, "height");
  if (width == 0 || height == 0) {
    throw PgmError(PgmErrorKind::ZeroDimension, width_at,
                   std::to_string(width) + "x" + std::to_string(height));
  }
  const std::size_t maxval_at = in.pos();
  const long maxval = in.read_uint(PgmErrorKind::MalformedHeader, "maxval");
  if (maxval < 1 || maxval > 255) {
    throw PgmError(PgmErrorKind::MaxvalOutOfRange, maxval_at,
                   "maxval " + std::to_string(maxval) + " not in [1,255]");
  }

  const auto count = static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
  std::vector<std::uint8_t> data(count);

  if (binary) {
    // Exactly one whitespace byte separates the header from the raster.
    if (in.at_end()) {
      throw PgmError(PgmErrorKind::TruncatedPayload, in.pos(), "missing raster");
    }
    in.next();
    if (in.remaining() < count) {
      throw PgmError(PgmErrorKind::TruncatedPayload, bytes.size(),
                     "expected " + std::to_string(count) + " raster bytes, found " +
                         std::to_string(in.remaining()));
    }
    for (std::size_t i = 0; i < count; ++i) {
      const std::size_t at = in.pos();
      data[i] = in.next();
      if (data[i] > maxval) {
        throw PgmError(PgmErrorKind::SampleOutOfRange, at,
                       "sample " + std::to_string(data[i]) + " exceeds maxval");
      }
    }
  } else {
    for (std::size_t i = 0; i < count; ++i) {
      in.skip_space_and_comments();
      if (in.at_end()) {
        throw PgmError(PgmErrorKind::TruncatedPayload, in.pos(),
                       "expected " + std::to_string(count) + " samples, found " +
                           std::to_string(i));
      }
      const std::size_t at = in.pos();
      const long v = in.read_uint(PgmErrorKind::TruncatedPayload, "sample");
      if (v > maxval) {
        throw PgmError(PgmErrorKind::SampleOutOfRange, at,
                       "sample " + std::to_string(v) + " exceeds maxval");
      }
      data[i] = static_cast<std::uint8_t>(v);
    }
  }

  return {GrayImage(static_cast<int>(width), static_cast<int>(height), std::move(data)),
          static_cast<int>(maxval)};
}

GrayImage decode_pgm(std::span<const std::uint8_t> bytes) {
  return decode_pgm_with_maxval(bytes).image;
}

namespace {

std::vector<std::uint8_t> header(const char* magic, int w, int h, int maxval) {
  const std::string text = std::string(magic) + "\n" + std::to_string(w) + " " +
                           std::to_string(h) + "\n" + std::to_string(maxval) + "\n";
  return {text.begin(), text.end()};
}

}  // namespace

std::vector<std::uint8_t> encode_pgm(const GrayImage& img, int maxval) {
  if (maxval < 1 || maxval > 255) {
    throw std::invalid_argument("encode_pgm: maxval must be in [1,255]");
  }
  for (std::uint8_t v : img.pixels()) {
    if (v > maxval) throw std::invalid_argument("encode_pgm: sample exceeds maxval");
  }
  auto out = header("P5", img.width(), img.height(), maxval);
  out.insert(out.end(), img.pixels().begin(), img.pixels().end());
  return out;
}

std::vector<std::uint8_t> encode_pgm(const BinaryMask& mask) {
  auto out = header("P5", mask.width(), mask.height(), 255);
  out.insert(out.end(), mask.pixels().begin(), mask.pixels().end());
  return out;
}

std::vector<std::uint8_t> encode_ppm(const RgbImage& img) {
  auto out = header("P6", img.width(), img.height(), 255);
  out.insert(out.end(), img.bytes().begin(), img.bytes().end());
  return out;
}

std::vector<std::uint8_t> read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string() + " for reading");
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  if (in.bad()) throw Error("read failed: " + path.string());
  return bytes;
}

void write_file(const std::filesystem::path& path, std::span<const std::uint8_t> bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error("write failed: " + path.string());
}

}  // namespace nanoseg
