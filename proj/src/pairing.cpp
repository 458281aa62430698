#include "tchaos/pairing.hpp"

#include <algorithm>
#include <cmath>

#include "tchaos/errors.hpp"
#include "tchaos/simd.hpp"

namespace tchaos {

PairingOperator::PairingOperator(const OperatorConfig& cfg, std::shared_ptr<const Lattice> lattice)
    : cfg_(cfg), lattice_(std::move(lattice)) {
  const Lattice& L = *lattice_;
  const ScalingGeometry& g = L.geometry;
  if (g.d() != cfg_.kernel.geometry().d() || g.d() != cfg_.test.geometry().d())
    throw DimensionError("operator geometry mismatch");
  for (std::size_t a = 0; a < g.d(); ++a) {
    double need = std::pow(cfg_.y_radius, g.s()[a]);
    if (L.periodic && need > L.extent[a] - L.step[a])
      throw PreconditionError("lattice period too small for the y-ball");
  }
  std::size_t N = L.size();
  Point p(g.d());
  std::vector<double> phi;
  for (std::size_t f = 0; f < N; ++f) {
    L.coords(f, p.data());
    double v = cfg_.test.eval(p);
    if (v != 0.0) {
      xs_.push_back(f);
      phi.push_back(v);
    }
    if (g.metric(p) <= cfg_.y_radius) ys_.push_back(f);
  }
  if (xs_.empty()) throw ResolutionError("test function support holds no lattice site (lambda < h)");

  const double cell = L.cell_volume();
  const double cut = cfg_.diagonal_policy * L.h * (1.0 - 1e-9);
  const bool y_singular = cfg_.kernel.re() >= 1;
  const bool one_d = g.d() == 1;
  W_.assign(xs_.size() * ys_.size(), 0.0);
  Point x(g.d()), y(g.d());
  std::vector<Point> ypts(ys_.size());
  for (std::size_t j = 0; j < ys_.size(); ++j) ypts[j] = L.point(ys_[j]);
  for (std::size_t i = 0; i < xs_.size(); ++i) {
    L.coords(xs_[i], x.data());
    for (std::size_t j = 0; j < ys_.size(); ++j) {
      const Point& yj = ypts[j];
      if (g.distance(x, yj) < cut || (y_singular && g.metric(yj) < cut)) {
        ++excluded_;
        continue;
      }
      double k = one_d ? cfg_.kernel.K_1d(x[0], yj[0]) : cfg_.kernel.K(x, yj);
      if (!std::isfinite(k)) {
        ++excluded_;
        continue;
      }
      double w = phi[i] * k * cell * cell;
      W_[i * ys_.size() + j] = w;
      weight_l1_ += std::fabs(w);
    }
  }
}

void PairingOperator::factors(const FieldSample& s, const TwoPointFunctional& F, std::vector<double>& t1,
                              std::vector<double>& t2) const {
  if (s.values.size() != lattice_->size()) throw DimensionError("sample does not match operator lattice");
  TruncTrigFactor f1(F.spec_x, F.theta_x, F.r1, s.sigma2);
  TruncTrigFactor f2(F.spec_y, F.theta_y, F.r2, s.sigma2);
  t1.resize(xs_.size());
  t2.resize(ys_.size());
  for (std::size_t i = 0; i < xs_.size(); ++i) t1[i] = f1(s.x_scale * s.values[xs_[i]]);
  for (std::size_t j = 0; j < ys_.size(); ++j) t2[j] = f2(s.x_scale * s.values[ys_[j]]);
}

double PairingOperator::apply(const FieldSample& s, const TwoPointFunctional& F) const {
  if (F.r1 > F.max_deriv || F.r2 > F.max_deriv) throw PreconditionError("theta derivative order above max_deriv");
  TruncTrigFactor f1(F.spec_x, F.theta_x, F.r1, s.sigma2);
  TruncTrigFactor f2(F.spec_y, F.theta_y, F.r2, s.sigma2);
  if (f1.vanishes() || f2.vanishes()) return 0.0;
  std::vector<double> t1, t2;
  factors(s, F, t1, t2);
  return simd::bilinear(t1.data(), W_.data(), xs_.size(), ys_.size(), ys_.size(), t2.data());
}

std::vector<double> PairingOperator::apply_many(const FieldSample& s, const std::vector<TwoPointFunctional>& Fs) const {
  std::vector<double> out;
  out.reserve(Fs.size());
  for (const auto& F : Fs) out.push_back(apply(s, F));
  return out;
}

double PairingOperator::envelope(const FieldSample& s, const TwoPointFunctional& F) const {
  std::vector<double> t1, t2;
  factors(s, F, t1, t2);
  double m1 = 0.0, m2 = 0.0;
  for (double v : t1) m1 = std::max(m1, std::fabs(v));
  for (double v : t2) m2 = std::max(m2, std::fabs(v));
  return m1 * m2 * weight_l1_;
}

double apply(const OperatorConfig& cfg, const FieldSample& s) {
  return PairingOperator(cfg, s.lattice).apply(s);
}

double apply_single(double theta, const ChaosTruncSpec& spec, const TestFunction& test, const FieldSample& s, int r) {
  const Lattice& L = *s.lattice;
  if (L.geometry.d() != test.geometry().d()) throw DimensionError("test function geometry mismatch");
  TruncTrigFactor f(spec, theta, r, s.sigma2);
  Point p(L.geometry.d());
  std::vector<double> terms;
  for (std::size_t i = 0; i < L.size(); ++i) {
    L.coords(i, p.data());
    double v = test.eval(p);
    if (v != 0.0) terms.push_back(v * f(s.x_scale * s.values[i]));
  }
  if (terms.empty()) throw ResolutionError("test function support holds no lattice site (lambda < h)");
  if (f.vanishes()) return 0.0;
  double acc = 0.0;
  for (double t : terms) acc += t;
  return acc * L.cell_volume();
}

FieldSample subsample(const FieldSample& s) {
  const Lattice& L = *s.lattice;
  if (!L.periodic) throw PreconditionError("subsample needs a periodic lattice");
  const auto& sv = L.geometry.s();
  std::vector<std::size_t> fac(sv.size()), counts(sv.size());
  for (std::size_t a = 0; a < sv.size(); ++a) {
    double f = std::pow(2.0, sv[a]);
    if (std::fabs(f - std::round(f)) > 1e-12) throw PreconditionError("subsample needs integer scaling exponents");
    fac[a] = static_cast<std::size_t>(std::llround(f));
    if (L.counts[a] % fac[a] != 0 || L.origin[a] % static_cast<long>(fac[a]) != 0)
      throw PreconditionError("lattice counts not divisible by the coarsening factor");
    counts[a] = L.counts[a] / fac[a];
  }
  auto coarse = std::make_shared<const Lattice>(periodic_lattice(L.geometry, 2.0 * L.h, counts));
  FieldSample out;
  out.lattice = coarse;
  out.sigma2 = s.sigma2;
  out.x_scale = s.x_scale;
  out.spectrum_id = s.spectrum_id;
  out.values.resize(coarse->size());
  for (std::size_t f = 0; f < coarse->size(); ++f) {
    auto idx = coarse->index(f);
    for (std::size_t a = 0; a < idx.size(); ++a) idx[a] *= static_cast<long>(fac[a]);
    out.values[f] = s.values[L.flat(idx)];
  }
  return out;
}

}  // namespace tchaos
