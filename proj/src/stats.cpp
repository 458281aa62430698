#include "tchaos/stats.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

#include "tchaos/errors.hpp"
#include "tchaos/rng.hpp"

namespace tchaos {

double pairwise_sum(const double* v, std::size_t n) {
  if (n <= 8) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += v[i];
    return s;
  }
  std::size_t h = n / 2;
  return pairwise_sum(v, h) + pairwise_sum(v + h, n - h);
}

double mean(const std::vector<double>& v) { return v.empty() ? 0.0 : pairwise_sum(v) / static_cast<double>(v.size()); }

void bootstrap_indices(std::uint64_t seed, std::uint64_t b, std::size_t n, std::vector<std::size_t>& out) {
  Stream rs(seed, b, stream_tag::bootstrap);
  out.resize(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = static_cast<std::size_t>(rs.uniform() * static_cast<double>(n)) % n;
}

double quantile_sorted(const std::vector<double>& s, double q) {
  if (s.empty()) return 0.0;
  double pos = q * static_cast<double>(s.size() - 1);
  std::size_t i = static_cast<std::size_t>(std::floor(pos));
  std::size_t j = std::min(i + 1, s.size() - 1);
  double f = pos - static_cast<double>(i);
  return s[i] * (1.0 - f) + s[j] * f;
}

std::pair<double, double> percentile_bootstrap(std::size_t n, const std::function<double(const std::vector<std::size_t>&)>& stat, int n_boot,
                                               std::uint64_t seed, double level) {
  std::vector<double> reps;
  reps.reserve(n_boot);
  std::vector<std::size_t> idx;
  for (int b = 0; b < n_boot; ++b) {
    bootstrap_indices(seed, static_cast<std::uint64_t>(b), n, idx);
    reps.push_back(stat(idx));
  }
  std::sort(reps.begin(), reps.end());
  double a = (1.0 - level) / 2.0;
  return {quantile_sorted(reps, a), quantile_sorted(reps, 1.0 - a)};
}

LinearFit ols(const std::vector<std::vector<double>>& X, const std::vector<double>& y) {
  std::size_t n = y.size();
  std::size_t p = X.empty() ? 1 : X[0].size() + 1;
  if (X.size() != n) throw DimensionError("design and response sizes differ");
  if (n < p) throw PreconditionError("not enough points for the fit");
  Eigen::MatrixXd A(n, p);
  Eigen::VectorXd b(n);
  for (std::size_t i = 0; i < n; ++i) {
    A(i, 0) = 1.0;
    for (std::size_t k = 1; k < p; ++k) A(i, k) = X[i][k - 1];
    b(i) = y[i];
  }
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(A);
  Eigen::VectorXd beta = qr.solve(b);
  Eigen::VectorXd res = b - A * beta;
  LinearFit f;
  f.coef.assign(beta.data(), beta.data() + p);
  double dof = static_cast<double>(n) - static_cast<double>(p);
  double s2 = dof > 0 ? res.squaredNorm() / dof : 0.0;
  f.residual_sd = std::sqrt(s2);
  Eigen::MatrixXd cov = s2 * (A.transpose() * A).inverse();
  for (std::size_t k = 0; k < p; ++k) f.stderr_.push_back(std::sqrt(std::max(0.0, cov(k, k))));
  return f;
}

LinearFit loglog_fit(const std::vector<double>& x, const std::vector<double>& y) {
  std::vector<std::vector<double>> X;
  std::vector<double> ly;
  for (std::size_t i = 0; i < x.size(); ++i) {
    X.push_back({std::log(x[i])});
    ly.push_back(std::log(y[i]));
  }
  return ols(X, ly);
}

}  // namespace tchaos
