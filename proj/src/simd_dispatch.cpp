#include <atomic>
#include <cstdlib>
#include <cstring>
#include <vector>

#include "tchaos/simd.hpp"

namespace tchaos::simd {

namespace {
Backend cpu() {
#if defined(__x86_64__) || defined(__i386__)
  __builtin_cpu_init();
  if (__builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma")) return Backend::avx2;
#endif
  return Backend::scalar;
}

// TCHAOS_SIMD=scalar pins the reference path.
Backend detect() {
  const char* e = std::getenv("TCHAOS_SIMD");
  if (e && std::strcmp(e, "scalar") == 0) return Backend::scalar;
  return cpu();
}

std::atomic<Backend>& current() {
  static std::atomic<Backend> b{detect()};
  return b;
}
}  // namespace

bool avx2_available() { return cpu() == Backend::avx2; }
Backend active() { return current().load(std::memory_order_relaxed); }

void force(Backend b) {
  if (b == Backend::avx2 && !avx2_available()) b = Backend::scalar;
  current().store(b, std::memory_order_relaxed);
}

const char* backend_name(Backend b) { return b == Backend::avx2 ? "avx2" : "scalar"; }

double dot(const double* a, const double* b, std::size_t n) {
  return active() == Backend::avx2 ? avx2::dot(a, b, n) : scalar::dot(a, b, n);
}

void gemv(const double* A, std::size_t rows, std::size_t cols, std::size_t lda, const double* x, double* y) {
  if (active() == Backend::avx2)
    avx2::gemv(A, rows, cols, lda, x, y);
  else
    scalar::gemv(A, rows, cols, lda, x, y);
}

double bilinear(const double* u, const double* A, std::size_t rows, std::size_t cols, std::size_t lda, const double* x) {
  std::vector<double> y(rows);
  gemv(A, rows, cols, lda, x, y.data());
  return dot(u, y.data(), rows);
}

}  // namespace tchaos::simd
