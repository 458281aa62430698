#pragma once
#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

namespace tchaos {

// Fixed-order pairwise summation.
double pairwise_sum(const double* v, std::size_t n);
inline double pairwise_sum(const std::vector<double>& v) { return pairwise_sum(v.data(), v.size()); }
double mean(const std::vector<double>& v);

// Resample indices for bootstrap replicate b, keyed by (seed, b).
void bootstrap_indices(std::uint64_t seed, std::uint64_t b, std::size_t n, std::vector<std::size_t>& out);

// Percentile interval of stat over n_boot resamples of {0..n-1}.
std::pair<double, double> percentile_bootstrap(std::size_t n, const std::function<double(const std::vector<std::size_t>&)>& stat,
                                               int n_boot, std::uint64_t seed, double level = 0.95);

double quantile_sorted(const std::vector<double>& sorted, double q);

struct LinearFit {
  std::vector<double> coef;    // intercept first
  std::vector<double> stderr_;
  double residual_sd = 0.0;
};

// Ordinary least squares y ~ 1 + X.
LinearFit ols(const std::vector<std::vector<double>>& X, const std::vector<double>& y);
// log y ~ a + b log x
LinearFit loglog_fit(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace tchaos
