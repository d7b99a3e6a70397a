#pragma once

namespace nanoseg::parallel {

/// Number of OpenMP threads kernels will use.
int max_threads();

/// Caps kernel parallelism; values < 1 are clamped to 1.
void set_threads(int n);

/// Reads NANOSEG_THREADS; returns `fallback` when unset or unparsable.
int threads_from_env(int fallback);

/// Restores the previous thread count on destruction.
class ScopedThreads {
 public:
  explicit ScopedThreads(int n);
  ~ScopedThreads();
  ScopedThreads(const ScopedThreads&) = delete;
  ScopedThreads& operator=(const ScopedThreads&) = delete;

 private:
  int previous_;
};

}  // namespace nanoseg::parallel
