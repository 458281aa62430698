#pragma once
#include <cstddef>
#include <cstdint>
#include <vector>

namespace tchaos {

using Point = std::vector<double>;

// Anisotropic scaling s = (s_1..s_d), |x|_s = sup_i |x_i|^{1/s_i}.
class ScalingGeometry {
 public:
  explicit ScalingGeometry(std::vector<double> s);

  std::size_t d() const { return s_.size(); }
  const std::vector<double>& s() const { return s_; }
  double total() const { return total_; }
  double max_s() const { return max_s_; }

  double metric(const Point& x) const;
  // Metric of a difference, avoiding a temporary.
  double distance(const Point& x, const Point& y) const;
  // x_i -> scale^{s_i} x_i
  Point dilate(const Point& x, double scale) const;

 private:
  std::vector<double> s_;
  double total_ = 0.0;
  double max_s_ = 0.0;
};

double metric(const Point& x, const ScalingGeometry& g);

// exp(1 - 1/(1-|u|^2)) on the open unit ball, sup 1. |u| Euclidean.
double bump_profile(const Point& u);
double bump_profile_sq(double u2);

class TestFunction {
 public:
  TestFunction(const ScalingGeometry& g, Point center, double scale);

  double operator()(const Point& y) const { return eval(y); }
  double eval(const Point& y) const;
  double prefactor() const { return prefactor_; }
  double scale() const { return scale_; }
  const Point& center() const { return center_; }
  const ScalingGeometry& geometry() const { return g_; }

 private:
  ScalingGeometry g_;
  Point center_;
  double scale_;
  double prefactor_;
  std::vector<double> axis_scale_;
};

double eval_test_function(const TestFunction& tf, const Point& y);

// Box lattice with per-axis spacing h^{s_i}. Row-major, last axis fastest.
struct Lattice {
  ScalingGeometry geometry{std::vector<double>{1.0}};
  double h = 0.0;
  std::vector<double> extent;
  std::vector<std::size_t> counts;
  std::vector<double> step;
  std::vector<long> origin;  // index of coordinate 0 on each axis
  bool periodic = false;

  std::size_t size() const;
  double cell_volume() const;
  Point point(std::size_t flat) const;
  void coords(std::size_t flat, double* out) const;
  std::size_t flat(const std::vector<long>& idx) const;
  std::vector<long> index(std::size_t flat) const;
};

inline constexpr std::size_t kDefaultLatticeBudget = std::size_t(1) << 26;

Lattice build_lattice(const ScalingGeometry& g, double h, const std::vector<double>& extent,
                      std::size_t max_points = kDefaultLatticeBudget);

// Periodic lattice with counts[i] points on axis i, coordinate (k - n/2)*step.
Lattice periodic_lattice(const ScalingGeometry& g, double h, const std::vector<std::size_t>& counts,
                         std::size_t max_points = kDefaultLatticeBudget);

}  // namespace tchaos
