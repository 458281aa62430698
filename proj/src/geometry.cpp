#include "tchaos/geometry.hpp"

#include <cmath>
#include <string>

#include "tchaos/errors.hpp"

namespace tchaos {

ScalingGeometry::ScalingGeometry(std::vector<double> s) : s_(std::move(s)) {
  if (s_.empty()) throw DimensionError("scaling vector is empty");
  for (double v : s_) {
    if (!(v >= 1.0)) throw PreconditionError("scaling exponents must be >= 1");
    total_ += v;
    max_s_ = std::max(max_s_, v);
  }
}

double ScalingGeometry::metric(const Point& x) const {
  if (x.size() != d()) throw DimensionError("point has " + std::to_string(x.size()) + " coordinates, geometry has " + std::to_string(d()));
  double r = 0.0;
  for (std::size_t i = 0; i < d(); ++i) {
    double a = std::fabs(x[i]);
    if (a > 0.0) r = std::max(r, s_[i] == 1.0 ? a : std::pow(a, 1.0 / s_[i]));
  }
  return r;
}

double ScalingGeometry::distance(const Point& x, const Point& y) const {
  if (x.size() != d() || y.size() != d()) throw DimensionError("dimension mismatch");
  double r = 0.0;
  for (std::size_t i = 0; i < d(); ++i) {
    double a = std::fabs(x[i] - y[i]);
    if (a > 0.0) r = std::max(r, s_[i] == 1.0 ? a : std::pow(a, 1.0 / s_[i]));
  }
  return r;
}

Point ScalingGeometry::dilate(const Point& x, double scale) const {
  if (x.size() != d()) throw DimensionError("dimension mismatch");
  Point out(x.size());
  for (std::size_t i = 0; i < d(); ++i) out[i] = std::pow(scale, s_[i]) * x[i];
  return out;
}

double metric(const Point& x, const ScalingGeometry& g) { return g.metric(x); }

double bump_profile_sq(double u2) {
  if (u2 >= 1.0) return 0.0;
  return std::exp(1.0 - 1.0 / (1.0 - u2));
}

double bump_profile(const Point& u) {
  double u2 = 0.0;
  for (double v : u) u2 += v * v;
  return bump_profile_sq(u2);
}

TestFunction::TestFunction(const ScalingGeometry& g, Point center, double scale)
    : g_(g), center_(std::move(center)), scale_(scale) {
  if (center_.size() != g_.d()) throw DimensionError("test function center dimension mismatch");
  if (!(scale_ > 0.0 && scale_ <= 1.0)) throw PreconditionError("test function scale must lie in (0,1]");
  prefactor_ = std::pow(scale_, -g_.total());
  axis_scale_.resize(g_.d());
  for (std::size_t i = 0; i < g_.d(); ++i) axis_scale_[i] = std::pow(scale_, g_.s()[i]);
}

double TestFunction::eval(const Point& y) const {
  if (y.size() != g_.d()) throw DimensionError("dimension mismatch");
  double u2 = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    double u = (y[i] - center_[i]) / axis_scale_[i];
    if (std::fabs(u) >= 1.0) return 0.0;
    u2 += u * u;
  }
  return prefactor_ * bump_profile_sq(u2);
}

double eval_test_function(const TestFunction& tf, const Point& y) { return tf.eval(y); }

std::size_t Lattice::size() const {
  std::size_t n = 1;
  for (auto c : counts) n *= c;
  return n;
}

double Lattice::cell_volume() const {
  double v = 1.0;
  for (double s : step) v *= s;
  return v;
}

void Lattice::coords(std::size_t flat, double* out) const {
  for (std::size_t a = counts.size(); a-- > 0;) {
    std::size_t k = flat % counts[a];
    flat /= counts[a];
    out[a] = (static_cast<long>(k) - origin[a]) * step[a];
  }
}

Point Lattice::point(std::size_t flat) const {
  Point p(counts.size());
  coords(flat, p.data());
  return p;
}

std::size_t Lattice::flat(const std::vector<long>& idx) const {
  std::size_t f = 0;
  for (std::size_t a = 0; a < counts.size(); ++a) {
    long k = idx[a];
    if (periodic) {
      long n = static_cast<long>(counts[a]);
      k = ((k % n) + n) % n;
    }
    f = f * counts[a] + static_cast<std::size_t>(k);
  }
  return f;
}

std::vector<long> Lattice::index(std::size_t flat) const {
  std::vector<long> idx(counts.size());
  for (std::size_t a = counts.size(); a-- > 0;) {
    idx[a] = static_cast<long>(flat % counts[a]);
    flat /= counts[a];
  }
  return idx;
}

static void check_budget(const std::vector<std::size_t>& counts, std::size_t max_points) {
  double n = 1.0;
  for (auto c : counts) n *= static_cast<double>(c);
  if (n > static_cast<double>(max_points))
    throw ResourceError("lattice needs " + std::to_string(static_cast<long long>(n)) + " points, budget " + std::to_string(max_points));
}

Lattice build_lattice(const ScalingGeometry& g, double h, const std::vector<double>& extent, std::size_t max_points) {
  if (!(h > 0.0)) throw PreconditionError("lattice step must be positive");
  if (extent.size() != g.d()) throw DimensionError("extent dimension mismatch");
  Lattice L;
  L.geometry = g;
  L.h = h;
  L.extent = extent;
  for (std::size_t a = 0; a < g.d(); ++a) {
    if (!(extent[a] > 0.0)) throw PreconditionError("extent must be positive");
    double st = std::pow(h, g.s()[a]);
    long half = static_cast<long>(std::floor(extent[a] / st + 1e-9));
    L.step.push_back(st);
    L.counts.push_back(static_cast<std::size_t>(2 * half + 1));
    L.origin.push_back(half);
  }
  check_budget(L.counts, max_points);
  return L;
}

Lattice periodic_lattice(const ScalingGeometry& g, double h, const std::vector<std::size_t>& counts, std::size_t max_points) {
  if (!(h > 0.0)) throw PreconditionError("lattice step must be positive");
  if (counts.size() != g.d()) throw DimensionError("counts dimension mismatch");
  Lattice L;
  L.geometry = g;
  L.h = h;
  L.periodic = true;
  L.counts = counts;
  for (std::size_t a = 0; a < g.d(); ++a) {
    if (counts[a] < 2) throw PreconditionError("periodic axis needs at least 2 points");
    double st = std::pow(h, g.s()[a]);
    L.step.push_back(st);
    L.origin.push_back(static_cast<long>(counts[a] / 2));
    L.extent.push_back(st * static_cast<double>(counts[a] / 2));
  }
  check_budget(L.counts, max_points);
  return L;
}

}  // namespace tchaos
