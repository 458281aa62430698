#pragma once
#include <memory>
#include <vector>

#include "tchaos/chaos.hpp"
#include "tchaos/field.hpp"
#include "tchaos/geometry.hpp"
#include "tchaos/kernel.hpp"

namespace tchaos {

struct OperatorConfig {
  RenormKernel kernel;
  TestFunction test;
  TwoPointFunctional functional;
  int diagonal_policy = 1;  // cells with |x-y|_s < policy*h are dropped
  double y_radius = 2.0;
};

// Riemann-sum discretization of A_{eps,lambda} on a fixed lattice:
// A F = sum_x sum_y phi(x) K(x,y) F(x,y) cell^2, stored as a dense
// (x-sites) x (y-sites) weight matrix.
class PairingOperator {
 public:
  PairingOperator(const OperatorConfig& cfg, std::shared_ptr<const Lattice> lattice);

  double apply(const FieldSample& s) const { return apply(s, cfg_.functional); }
  double apply(const FieldSample& s, const TwoPointFunctional& F) const;
  std::vector<double> apply_many(const FieldSample& s, const std::vector<TwoPointFunctional>& Fs) const;
  // sup|F| over the sample times sum |W|.
  double envelope(const FieldSample& s, const TwoPointFunctional& F) const;

  std::size_t x_sites() const { return xs_.size(); }
  std::size_t y_sites() const { return ys_.size(); }
  double weight_l1() const { return weight_l1_; }
  long excluded_cells() const { return excluded_; }
  const OperatorConfig& config() const { return cfg_; }

 private:
  void factors(const FieldSample& s, const TwoPointFunctional& F, std::vector<double>& t1, std::vector<double>& t2) const;

  OperatorConfig cfg_;
  std::shared_ptr<const Lattice> lattice_;
  std::vector<std::size_t> xs_, ys_;
  std::vector<double> W_;
  double weight_l1_ = 0.0;
  long excluded_ = 0;
};

double apply(const OperatorConfig& cfg, const FieldSample& s);

// B F(theta) = sum_x d^r_theta T(trig(theta X(x))) phi(x) cell.
double apply_single(double theta, const ChaosTruncSpec& spec, const TestFunction& test, const FieldSample& s, int r = 0);

// Every 2^{s_i}-th site of a periodic sample: the same field on the lattice
// with base step 2h. Requires integer s_i.
FieldSample subsample(const FieldSample& s);

}  // namespace tchaos
