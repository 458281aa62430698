#include "tchaos/quadrature.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>

namespace tchaos {

namespace {

template <class Real>
void orthonormal_hermite(Real x, std::size_t n, Real& pn, Real& pn1, Real& sumsq) {
  // p_0 .. p_n, returns p_n, p_{n-1}, sum_{k<n} p_k^2
  Real p0 = 1, p1 = x;
  sumsq = 1;
  if (n == 0) {
    pn = p0;
    pn1 = 0;
    sumsq = 0;
    return;
  }
  for (std::size_t k = 1; k < n; ++k) {
    sumsq += p1 * p1;
    Real p2 = (x * p1 - std::sqrt(Real(k)) * p0) / std::sqrt(Real(k + 1));
    p0 = p1;
    p1 = p2;
  }
  pn = p1;
  pn1 = p0;
}

}  // namespace

template <class Real>
Rule<Real> gauss_hermite(std::size_t n) {
  using Mat = Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic>;
  using Vec = Eigen::Matrix<Real, Eigen::Dynamic, 1>;
  Vec diag = Vec::Zero(n), sub(n > 0 ? n - 1 : 0);
  for (std::size_t k = 1; k < n; ++k) sub(k - 1) = std::sqrt(Real(k));
  Eigen::SelfAdjointEigenSolver<Mat> es;
  es.computeFromTridiagonal(diag, sub, Eigen::EigenvaluesOnly);
  Rule<Real> r;
  r.nodes.resize(n);
  r.weights.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    Real x = es.eigenvalues()(i);
    for (int it = 0; it < 8; ++it) {
      Real pn, pn1, s;
      orthonormal_hermite(x, n, pn, pn1, s);
      // p_n' = sqrt(n) p_{n-1}
      Real dx = pn / (std::sqrt(Real(n)) * pn1);
      x -= dx;
      if (std::fabs(dx) < std::numeric_limits<Real>::epsilon() * (1 + std::fabs(x))) break;
    }
    Real pn, pn1, s;
    orthonormal_hermite(x, n, pn, pn1, s);
    r.nodes[i] = x;
    r.weights[i] = 1 / s;
  }
  // symmetrize
  for (std::size_t i = 0; i < n / 2; ++i) {
    Real x = (r.nodes[n - 1 - i] - r.nodes[i]) / 2;
    Real w = (r.weights[n - 1 - i] + r.weights[i]) / 2;
    r.nodes[i] = -x;
    r.nodes[n - 1 - i] = x;
    r.weights[i] = r.weights[n - 1 - i] = w;
  }
  if (n % 2) r.nodes[n / 2] = 0;
  return r;
}

template Rule<double> gauss_hermite<double>(std::size_t);
template Rule<long double> gauss_hermite<long double>(std::size_t);

Rule<double> gauss_legendre(std::size_t n) {
  Rule<double> r;
  r.nodes.resize(n);
  r.weights.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 1.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (std::size_t k = 2; k <= n; ++k) {
        double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      if (n == 1) p0 = 1.0;
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      double dx = p1 / dp;
      x -= dx;
      if (std::fabs(dx) < 1e-16) break;
    }
    r.nodes[n - 1 - i] = x;
    r.weights[n - 1 - i] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
  return r;
}

namespace {
std::mutex cache_mu;
}

const Rule<double>& gauss_hermite_cached(std::size_t n) {
  static std::map<std::size_t, Rule<double>> cache;
  std::lock_guard<std::mutex> lk(cache_mu);
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, gauss_hermite<double>(n)).first;
  return it->second;
}

const Rule<double>& gauss_legendre_cached(std::size_t n) {
  static std::map<std::size_t, Rule<double>> cache;
  std::lock_guard<std::mutex> lk(cache_mu);
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, gauss_legendre(n)).first;
  return it->second;
}

}  // namespace tchaos

namespace tchaos {

void graded_rule(double a, double b, std::vector<double> singular, int levels, int nodes, double grade, std::vector<double>& x,
                 std::vector<double>& w) {
  x.clear();
  w.clear();
  if (!(b > a)) return;
  std::vector<double> cuts{a, b};
  for (double s : singular)
    if (s > a && s < b) cuts.push_back(s);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  const auto& gl = gauss_legendre_cached(static_cast<std::size_t>(nodes));
  auto panel = [&](double u, double v) {
    if (!(v > u)) return;
    double c = 0.5 * (u + v), h = 0.5 * (v - u);
    for (std::size_t i = 0; i < gl.nodes.size(); ++i) {
      x.push_back(c + h * gl.nodes[i]);
      w.push_back(h * gl.weights[i]);
    }
  };
  for (std::size_t p = 0; p + 1 < cuts.size(); ++p) {
    double u = cuts[p], v = cuts[p + 1], m = 0.5 * (u + v);
    // graded toward u
    double len = m - u;
    double r = 1.0;
    for (int k = 0; k < levels; ++k) {
      panel(u + len * r * grade, u + len * r);
      r *= grade;
    }
    panel(u, u + len * r);
    // graded toward v
    len = v - m;
    r = 1.0;
    for (int k = 0; k < levels; ++k) {
      panel(v - len * r, v - len * r * grade);
      r *= grade;
    }
    panel(v - len * r, v);
  }
}

double integrate_graded(const std::function<double(double)>& f, double a, double b, std::vector<double> singular, int levels, int nodes,
                        double grade) {
  std::vector<double> x, w;
  graded_rule(a, b, std::move(singular), levels, nodes, grade, x, w);
  long double s = 0.0L;
  for (std::size_t i = 0; i < x.size(); ++i) {
    double v = f(x[i]);
    if (std::isfinite(v)) s += w[i] * v;
  }
  return static_cast<double>(s);
}

}  // namespace tchaos
