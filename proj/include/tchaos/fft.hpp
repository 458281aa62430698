#pragma once
#include <complex>
#include <memory>
#include <vector>

namespace tchaos {

class FftPlans;

// Multi-dimensional real FFT plans (FFTW, row-major). Thread-safe execution.
std::shared_ptr<FftPlans> make_fft_plans(const std::vector<std::size_t>& counts);
void fft_forward(const FftPlans& p, double* in, std::complex<double>* out);
// Unnormalized; destroys `in`.
void fft_inverse(const FftPlans& p, std::complex<double>* in, double* out);
std::size_t fft_complex_size(const FftPlans& p);

}  // namespace tchaos
