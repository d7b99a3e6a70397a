#pragma once

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace nanoseg::detail {

// Largest odd kernel whose binomial weights keep 255 * 4^(k-1) inside int64.
inline constexpr int kMaxBinomialKernel = 27;

inline int clamp_index(int i, int n) { return std::clamp(i, 0, n - 1); }

/// Row k-1 of Pascal's triangle: the 1-D binomial kernel of size k.
inline std::vector<std::int64_t> binomial_row(int k) {
  std::vector<std::int64_t> row(static_cast<std::size_t>(k), 0);
  row[0] = 1;
  for (int n = 1; n < k; ++n) {
    for (int i = n; i > 0; --i) row[i] += row[i - 1];
  }
  return row;
}

/// Half-up rounding of num/den for num >= 0, den > 0.
inline std::int64_t round_half_up(std::int64_t num, std::int64_t den) {
  return (2 * num + den) / (2 * den);
}

inline void require_odd_kernel(int k, int min, const char* what) {
  if (k < min || k % 2 == 0) {
    throw std::invalid_argument(std::string(what) + " must be odd and >= " +
                                std::to_string(min) + ", got " + std::to_string(k));
  }
}

}  // namespace nanoseg::detail
