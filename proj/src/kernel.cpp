#include "tchaos/kernel.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "tchaos/errors.hpp"
#include "tchaos/quadrature.hpp"
#include "tchaos/rng.hpp"
#include "tchaos/stats.hpp"

namespace tchaos {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();

double smooth_f(double u) { return u > 0.0 ? std::exp(-1.0 / u) : 0.0; }

std::size_t active_axis(const ScalingGeometry& g, const Point& x) {
  std::size_t a = 0;
  double best = -1.0;
  for (std::size_t i = 0; i < g.d(); ++i) {
    double v = std::fabs(x[i]);
    v = v > 0.0 ? std::pow(v, 1.0 / g.s()[i]) : 0.0;
    if (v > best) {
      best = v;
      a = i;
    }
  }
  return a;
}

// d^k/dt^k |t|^{-q}
double power_derivative(double t, double q, int k) {
  double c = 1.0;
  for (int i = 0; i < k; ++i) c *= (-q - i);
  double v = c * std::pow(std::fabs(t), -q - k);
  if (k % 2 && t < 0.0) v = -v;
  return v;
}
}  // namespace

int compute_re(double gamma, double alpha, int m2) {
  double v = gamma - alpha * m2 / 2.0;
  int r = static_cast<int>(std::ceil(v - 1e-12));
  return r > 0 ? r : 0;
}

double cutoff_chi(double t) {
  if (t <= 0.5) return 1.0;
  if (t >= 1.0) return 0.0;
  double a = smooth_f(1.0 - t), b = smooth_f(t - 0.5);
  return a / (a + b);
}

RenormKernel::RenormKernel(const ScalingGeometry& g, double gamma, int re, double cutoff)
    : g_(g), gamma_(gamma), re_(re), cutoff_(cutoff) {
  if (!(gamma > 0.0 && gamma <= g.total() / 2.0 + 1e-12)) throw PreconditionError("kernel gamma must lie in (0, |s|/2]");
  if (re < 0 || re > kMaxTaylorOrder) throw PreconditionError("Taylor order must lie in [0, 2]");
  if (!(cutoff > 0.0)) throw PreconditionError("kernel cutoff must be positive");
}

double RenormKernel::K0(const Point& x) const {
  double r = g_.metric(x);
  if (r == 0.0) return kInf;
  double c = cutoff_chi(r / cutoff_);
  if (c == 0.0) return 0.0;
  return c * std::pow(r, -singularity());
}

double RenormKernel::K0_1d(double x) const {
  double r = std::fabs(x);
  if (r == 0.0) return kInf;
  double c = cutoff_chi(r / cutoff_);
  if (c == 0.0) return 0.0;
  return c * std::pow(r, -singularity());
}

double RenormKernel::chi_along(const Point& x, std::size_t a, double t) const {
  // chi(|t|^{1/s_a} / cutoff) with the other coordinates frozen (active axis a)
  double r = std::fabs(t);
  r = r > 0.0 ? std::pow(r, 1.0 / g_.s()[a]) : 0.0;
  (void)x;
  return cutoff_chi(r / cutoff_);
}

double RenormKernel::axis_derivative(const Point& x, std::size_t a, int k) const {
  double t = x[a];
  double q = singularity() / g_.s()[a];
  double h = fd_step();
  auto chi = [&](double u) { return chi_along(x, a, u); };
  double chid[4];
  chid[0] = chi(t);
  chid[1] = k >= 1 ? (chi(t + h) - chi(t - h)) / (2.0 * h) : 0.0;
  chid[2] = k >= 2 ? (chi(t + h) - 2.0 * chid[0] + chi(t - h)) / (h * h) : 0.0;
  chid[3] = k >= 3 ? (chi(t + 2 * h) - 2.0 * chi(t + h) + 2.0 * chi(t - h) - chi(t - 2 * h)) / (2.0 * h * h * h) : 0.0;
  double binom = 1.0, v = 0.0;
  for (int i = 0; i <= k; ++i) {
    if (i > 0) binom = binom * (k - i + 1) / i;
    if (chid[i] == 0.0) continue;
    v += binom * chid[i] * power_derivative(t, q, k - i);
  }
  return v;
}

double RenormKernel::D_K0(const Point& x, const std::vector<int>& j) const {
  if (j.size() != g_.d()) throw DimensionError("multi-index dimension mismatch");
  int order = 0;
  for (int v : j) {
    if (v < 0) throw PreconditionError("negative multi-index entry");
    order += v;
  }
  if (order > 3) throw PreconditionError("derivatives of K0 supported up to order 3");
  if (g_.metric(x) == 0.0) return kInf;
  if (order == 0) return K0(x);
  // locally K0 depends on the active axis only
  std::size_t a = active_axis(g_, x);
  for (std::size_t i = 0; i < j.size(); ++i)
    if (i != a && j[i] != 0) return 0.0;
  return axis_derivative(x, a, j[a]);
}

double RenormKernel::K(const Point& x, const Point& y) const {
  if (x.size() != g_.d() || y.size() != g_.d()) throw DimensionError("dimension mismatch");
  Point diff(x.size()), my(y.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    diff[i] = x[i] - y[i];
    my[i] = -y[i];
  }
  double v = K0(diff);
  if (!std::isfinite(v)) return kInf;
  if (re_ == 0) return v;
  if (g_.metric(my) == 0.0) return kInf;
  v -= K0(my);
  if (re_ >= 2) {
    std::size_t a = active_axis(g_, my);
    v -= x[a] * axis_derivative(my, a, 1);
  }
  return v;
}

double RenormKernel::K_1d(double x, double y) const {
  double v = K0_1d(x - y);
  if (!std::isfinite(v)) return kInf;
  if (re_ == 0) return v;
  if (y == 0.0) return kInf;
  v -= K0_1d(-y);
  if (re_ >= 2) {
    Point my{-y};
    v -= x * axis_derivative(my, 0, 1);
  }
  return v;
}

double eval_K0(const Point& x, const RenormKernel& k) { return k.K0(x); }
double eval_K(const Point& x, const Point& y, const RenormKernel& k) { return k.K(x, y); }

nlohmann::json BoundReport::to_json() const {
  nlohmann::json j;
  j["re"] = re;
  j["regions"] = nlohmann::json::array();
  for (const auto& r : regions) j["regions"].push_back({{"region", r.region}, {"max_ratio", r.max_ratio}, {"samples", r.samples}});
  j["boundary_max_gap"] = boundary_max_gap;
  return j;
}

namespace {

// point with |p|_s = r: random active axis, random sign, others inside the ball
Point point_at_radius(const ScalingGeometry& g, double r, Stream& rs) {
  Point p(g.d());
  std::size_t a = static_cast<std::size_t>(rs.uniform() * g.d()) % g.d();
  for (std::size_t i = 0; i < g.d(); ++i) {
    double lim = std::pow(r, g.s()[i]);
    p[i] = i == a ? (rs.uniform() < 0.5 ? -lim : lim) : (2.0 * rs.uniform() - 1.0) * lim;
  }
  return p;
}

double log_uniform(Stream& rs, double lo, double hi) { return lo * std::exp(rs.uniform() * std::log(hi / lo)); }

}  // namespace

BoundReport check_region_bounds(const RenormKernel& k, long n_samples, std::uint64_t seed) {
  const auto& g = k.geometry();
  double p = k.singularity();
  int re = k.re();
  BoundReport rep;
  rep.re = re;
  Stream rs(seed, 77, stream_tag::mc);
  auto bound = [&](int region, const Point& x, const Point& y) {
    double ax = g.metric(x), ay = g.metric(y), axy = g.distance(x, y);
    if (region == 1) return std::pow(ax, re) / std::pow(ay, p + re);
    if (region == 2) return 1.0 / std::pow(axy, p);
    return std::pow(ax, re - 1) / std::pow(ay, p + re - 1);
  };
  if (re == 0) {
    RegionBound rb{"all", 0.0, 0};
    for (long s = 0; s < n_samples; ++s) {
      Point x = point_at_radius(g, log_uniform(rs, 1e-3, 1.0), rs);
      Point y = point_at_radius(g, log_uniform(rs, 1e-3, 2.0), rs);
      double kv = std::fabs(k.K(x, y));
      if (!std::isfinite(kv)) continue;
      rb.max_ratio = std::max(rb.max_ratio, kv * std::pow(g.distance(x, y), p));
      ++rb.samples;
    }
    rep.regions.push_back(rb);
    return rep;
  }
  const char* names[3] = {"|y|>2|x|", "|x|/2<|y|<=2|x|", "|y|<=|x|/2"};
  for (int region = 1; region <= 3; ++region) {
    RegionBound rb{names[region - 1], 0.0, 0};
    for (long s = 0; s < n_samples; ++s) {
      double ax = log_uniform(rs, 1e-3, 0.5);
      double ay;
      if (region == 1)
        ay = log_uniform(rs, 2.0 * ax * (1.0 + 1e-9), std::max(2.0, 4.0 * ax));
      else if (region == 2)
        ay = ax * (0.5 + 1.5 * rs.uniform()) + 1e-15;
      else
        ay = log_uniform(rs, 1e-4 * ax, 0.5 * ax);
      Point x = point_at_radius(g, ax, rs);
      Point y = point_at_radius(g, ay, rs);
      double kv = std::fabs(k.K(x, y));
      if (!std::isfinite(kv)) continue;
      rb.max_ratio = std::max(rb.max_ratio, kv / bound(region, x, y));
      ++rb.samples;
    }
    rep.regions.push_back(rb);
  }
  // adjacent bounds at the region boundaries
  double gap = 0.0;
  for (long s = 0; s < 1000; ++s) {
    double ax = log_uniform(rs, 1e-3, 0.5);
    Point x = point_at_radius(g, ax, rs);
    Point y1 = point_at_radius(g, 2.0 * ax, rs);
    Point y3 = point_at_radius(g, 0.5 * ax, rs);
    double r1 = bound(1, x, y1) / bound(2, x, y1);
    double r3 = bound(3, x, y3) / bound(2, x, y3);
    gap = std::max({gap, r1, 1.0 / r1, r3, 1.0 / r3});
  }
  rep.boundary_max_gap = gap;
  return rep;
}

double kernel_norm(const RenormKernel& k, int p, long n_samples, std::uint64_t seed) {
  const auto& g = k.geometry();
  Stream rs(seed, 91, stream_tag::mc);
  double sup = 0.0;
  std::vector<int> j(g.d(), 0);
  for (long s = 0; s < n_samples; ++s) {
    double r = log_uniform(rs, 1e-4, 1.0);
    Point x = point_at_radius(g, r, rs);
    for (int order = 0; order < p && order <= 3; ++order) {
      for (std::size_t a = 0; a < g.d(); ++a) {
        std::fill(j.begin(), j.end(), 0);
        j[a] = order;
        double v = std::fabs(k.D_K0(x, j));
        sup = std::max(sup, std::pow(g.metric(x), k.singularity() + order) * v);
        if (order == 0) break;
      }
    }
  }
  return sup;
}

SlopeFit taylor_slope(const RenormKernel& k, const Point& y, const Point& direction, double x_min, double x_max, int n_points) {
  std::vector<double> xs, vs;
  for (int i = 0; i < n_points; ++i) {
    double t = x_min * std::pow(x_max / x_min, static_cast<double>(i) / (n_points - 1));
    Point x = k.geometry().dilate(direction, t);
    double v = std::fabs(k.K(x, y));
    if (v > 0.0 && std::isfinite(v)) {
      xs.push_back(k.geometry().metric(x));
      vs.push_back(v);
    }
  }
  if (xs.size() < 3) throw ResolutionError("Taylor slope fit has fewer than 3 usable points");
  auto f = loglog_fit(xs, vs);
  return {f.coef[1], f.stderr_[1]};
}

double integrate_K_dy_1d(const RenormKernel& k, double x, int levels, int nodes) {
  if (k.geometry().d() != 1) throw DimensionError("1-d quadrature needs d = 1");
  std::vector<double> sing{x, 0.0, x - k.cutoff(), x + k.cutoff(), -k.cutoff(), k.cutoff()};
  return integrate_graded([&](double y) { return k.K_1d(x, y); }, -2.0, 2.0, sing, levels, nodes);
}

}  // namespace tchaos
