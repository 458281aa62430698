#pragma once
#include <cstddef>

namespace tchaos::simd {

enum class Backend { scalar, avx2 };

// Picked once from CPUID; force() overrides (tests, reproducibility runs).
Backend active();
void force(Backend b);
bool avx2_available();
const char* backend_name(Backend b);

double dot(const double* a, const double* b, std::size_t n);
// y[i] = sum_j A[i*lda + j] x[j], i < rows, j < cols
void gemv(const double* A, std::size_t rows, std::size_t cols, std::size_t lda, const double* x, double* y);
// sum_i u[i] * (A x)[i]
double bilinear(const double* u, const double* A, std::size_t rows, std::size_t cols, std::size_t lda, const double* x);

namespace scalar {
double dot(const double* a, const double* b, std::size_t n);
void gemv(const double* A, std::size_t rows, std::size_t cols, std::size_t lda, const double* x, double* y);
}  // namespace scalar

namespace avx2 {
double dot(const double* a, const double* b, std::size_t n);
void gemv(const double* A, std::size_t rows, std::size_t cols, std::size_t lda, const double* x, double* y);
}  // namespace avx2

}  // namespace tchaos::simd
