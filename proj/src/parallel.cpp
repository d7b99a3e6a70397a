#include "nanoseg/parallel.hpp"

#include <omp.h>

#include <algorithm>
#include <cstdlib>
#include <string>

namespace nanoseg::parallel {

int max_threads() { return omp_get_max_threads(); }

void set_threads(int n) { omp_set_num_threads(std::max(1, n)); }

int threads_from_env(int fallback) {
  const char* raw = std::getenv("NANOSEG_THREADS");
  if (raw == nullptr || *raw == '\0') return fallback;
  try {
    std::size_t used = 0;
    const int n = std::stoi(raw, &used);
    if (used != std::string(raw).size() || n < 1) return fallback;
    return n;
  } catch (const std::exception&) {
    return fallback;
  }
}

ScopedThreads::ScopedThreads(int n) : previous_(max_threads()) { set_threads(n); }

ScopedThreads::~ScopedThreads() { set_threads(previous_); }

}  // namespace nanoseg::parallel
