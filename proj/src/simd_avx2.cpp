#include <immintrin.h>

#include "tchaos/simd.hpp"

namespace tchaos::simd::avx2 {

double dot(const double* a, const double* b, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) acc = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc);
  __m128d lo = _mm256_castpd256_pd128(acc);
  __m128d hi = _mm256_extractf128_pd(acc, 1);
  __m128d s2 = _mm_add_pd(lo, hi);
  double s = _mm_cvtsd_f64(s2) + _mm_cvtsd_f64(_mm_unpackhi_pd(s2, s2));
  for (; i < n; ++i) s += a[i] * b[i];
  return s;
}

void gemv(const double* A, std::size_t rows, std::size_t cols, std::size_t lda, const double* x, double* y) {
  for (std::size_t r = 0; r < rows; ++r) y[r] = dot(A + r * lda, x, cols);
}

}  // namespace tchaos::simd::avx2
