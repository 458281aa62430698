#include "tchaos/simd.hpp"

namespace tchaos::simd::scalar {

// Four interleaved partial sums, combined pairwise: same association as the
// AVX2 lanes so both paths agree to rounding.
double dot(const double* a, const double* b, std::size_t n) {
  double s0 = 0.0, s1 = 0.0, s2 = 0.0, s3 = 0.0;
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    s0 += a[i] * b[i];
    s1 += a[i + 1] * b[i + 1];
    s2 += a[i + 2] * b[i + 2];
    s3 += a[i + 3] * b[i + 3];
  }
  double s = (s0 + s2) + (s1 + s3);
  for (; i < n; ++i) s += a[i] * b[i];
  return s;
}

void gemv(const double* A, std::size_t rows, std::size_t cols, std::size_t lda, const double* x, double* y) {
  for (std::size_t r = 0; r < rows; ++r) y[r] = dot(A + r * lda, x, cols);
}

}  // namespace tchaos::simd::scalar
