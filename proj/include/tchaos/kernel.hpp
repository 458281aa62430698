#pragma once
#include <cstdint>
#include <nlohmann/json.hpp>
#include <vector>

#include "tchaos/geometry.hpp"

namespace tchaos {

inline constexpr int kMaxTaylorOrder = 2;

// ceil(gamma - alpha m2 / 2) v 0, with a 1e-12 guard against round-off.
int compute_re(double gamma, double alpha, int m2);

// Smooth cutoff: 1 on [0,1/2], 0 on [1,inf).
double cutoff_chi(double t);

// K0(x) = chi(|x|_s / cutoff) |x|_s^{-(|s| - gamma)};
// K(x,y) = K0(x-y) - sum_{|j|<re} x^j/j! D^j K0(-y).
class RenormKernel {
 public:
  RenormKernel(const ScalingGeometry& g, double gamma, int re, double cutoff = 1.0);

  const ScalingGeometry& geometry() const { return g_; }
  double gamma() const { return gamma_; }
  int re() const { return re_; }
  double cutoff() const { return cutoff_; }
  double singularity() const { return g_.total() - gamma_; }
  double fd_step() const { return 1e-4 * cutoff_; }

  // +inf at x = 0.
  double K0(const Point& x) const;
  // Multi-index derivative, |j| <= 3. +inf at x = 0.
  double D_K0(const Point& x, const std::vector<int>& j) const;
  // +inf when x = y, or y = 0 with re >= 1.
  double K(const Point& x, const Point& y) const;

  // 1-d fast paths (d = 1).
  double K0_1d(double x) const;
  double K_1d(double x, double y) const;

 private:
  // derivative of order k along axis a of K0, at a point whose active axis is a
  double axis_derivative(const Point& x, std::size_t a, int k) const;
  double chi_along(const Point& x, std::size_t a, double t) const;

  ScalingGeometry g_;
  double gamma_;
  int re_;
  double cutoff_;
};

double eval_K0(const Point& x, const RenormKernel& k);
double eval_K(const Point& x, const Point& y, const RenormKernel& k);

struct RegionBound {
  std::string region;
  double max_ratio = 0.0;
  long samples = 0;
};

struct BoundReport {
  int re = 0;
  std::vector<RegionBound> regions;
  double boundary_max_gap = 0.0;  // max ratio between adjacent bounds at |y| = 2|x| and |y| = |x|/2
  nlohmann::json to_json() const;
};

BoundReport check_region_bounds(const RenormKernel& k, long n_samples, std::uint64_t seed = 1);

// sup over sampled 0 < |x| <= 1 of |x|^{|s|-gamma+|k|} |D^k K0(x)| for every |k| < p.
double kernel_norm(const RenormKernel& k, int p, long n_samples, std::uint64_t seed = 1);

struct SlopeFit {
  double slope = 0.0;
  double stderr_ = 0.0;
};

// log|K(x,y)| vs log|x| along x -> 0 at fixed y.
SlopeFit taylor_slope(const RenormKernel& k, const Point& y, const Point& direction, double x_min = 1e-4, double x_max = 1e-2,
                      int n_points = 9);

// int_{|y| <= 2} K(x,y) dy in d = 1 by graded Gauss-Legendre panels.
double integrate_K_dy_1d(const RenormKernel& k, double x, int levels = 24, int nodes = 16);

}  // namespace tchaos
