#include "tchaos/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>

#include "tchaos/clustering.hpp"
#include "tchaos/errors.hpp"
#include "tchaos/pairing.hpp"
#include "tchaos/parallel.hpp"
#include "tchaos/quadrature.hpp"
#include "tchaos/rng.hpp"
#include "tchaos/stats.hpp"

namespace tchaos {

using nlohmann::json;

json MomentEstimate::to_json() const {
  return {{"n", n}, {"value", value}, {"ci_lo", ci_lo}, {"ci_hi", ci_hi}, {"n_samples", n_samples}};
}

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t tag) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ull * (tag + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

MomentEstimate moment_norm(const std::vector<double>& values, int n, std::uint64_t seed, int n_boot) {
  if (n < 1) throw PreconditionError("moment order n must be >= 1");
  if (static_cast<long>(values.size()) < kMinMomentSamples) throw PreconditionError("moment_norm needs at least 200 samples");
  MomentEstimate m;
  m.n = n;
  m.n_samples = static_cast<long>(values.size());
  std::vector<double> p(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) p[i] = std::pow(std::fabs(values[i]), 2 * n);
  const double inv = 1.0 / (2.0 * n);
  m.value = std::pow(mean(p), inv);
  if (m.value == 0.0) return m;
  std::vector<double> buf;
  auto ci = percentile_bootstrap(
      p.size(),
      [&](const std::vector<std::size_t>& idx) {
        buf.resize(idx.size());
        for (std::size_t i = 0; i < idx.size(); ++i) buf[i] = p[idx[i]];
        return std::pow(mean(buf), inv);
      },
      n_boot, seed);
  m.ci_lo = std::min(ci.first, m.value);
  m.ci_hi = std::max(ci.second, m.value);
  return m;
}

// ---- operator experiments ----

int OperatorSetup::resolved_re() const { return re >= 0 ? re : compute_re(gamma, cov.alpha, m2); }

double OperatorSetup::step(double eps) const { return h > 0.0 ? h : h_over_eps * eps; }

RenormKernel OperatorSetup::kernel() const { return RenormKernel(geometry, gamma, resolved_re(), cutoff); }

TwoPointFunctional OperatorSetup::functional(double theta_x, double theta_y) const {
  TwoPointFunctional F;
  F.spec_x = ChaosTruncSpec::make(trig1, m1);
  F.spec_y = ChaosTruncSpec::make(trig2, m2);
  F.theta_x = theta_x;
  F.theta_y = theta_y;
  F.r1 = r1;
  F.r2 = r2;
  return F;
}

namespace {

struct FieldContext {
  Spectrum spectrum;
  std::shared_ptr<const Lattice> lattice;
};

FieldContext make_field(const OperatorSetup& s, double eps) {
  double h = s.step(eps);
  if (eps < 2.0 * h * (1.0 - 1e-12)) throw ResolutionError("resolution guard eps >= 2h violated");
  CovarianceSpec cs = s.cov;
  cs.epsilon = eps;
  Lattice L = field_lattice(s.geometry, h, s.min_period);
  FieldContext fc{build_spectrum(cs, L), nullptr};
  fc.lattice = fc.spectrum.lattice;
  return fc;
}

OperatorConfig make_operator_config(const OperatorSetup& s, double lambda) {
  Point center(s.geometry.d(), 0.0);
  return OperatorConfig{s.kernel(), TestFunction(s.geometry, center, lambda), s.functional(0.0, 0.0), s.diagonal_policy, 2.0};
}

// values[l][t][i]: operator l, frequency pair t, sample i.
std::vector<std::vector<std::vector<double>>> sample_operators(const OperatorSetup& s, const FieldContext& fc,
                                                               const std::vector<PairingOperator>& ops,
                                                               const std::vector<TwoPointFunctional>& Fs,
                                                               std::uint64_t field_seed) {
  std::size_t ns = static_cast<std::size_t>(s.n_samples);
  std::vector<std::vector<std::vector<double>>> out(ops.size(),
                                                    std::vector<std::vector<double>>(Fs.size(), std::vector<double>(ns)));
  parallel_for(ns, s.workers, [&](std::size_t i) {
    FieldSample fs = sample_field(fc.spectrum, field_seed, i);
    for (std::size_t l = 0; l < ops.size(); ++l)
      for (std::size_t t = 0; t < Fs.size(); ++t) out[l][t][i] = ops[l].apply(fs, Fs[t]);
  });
  return out;
}

}  // namespace

json FreqSweepReport::to_json() const {
  json rj = json::array();
  for (const auto& r : rows)
    rj.push_back({{"eps", r.eps}, {"lambda", r.lambda}, {"theta_x", r.theta_x}, {"theta_y", r.theta_y}, {"estimate", r.est.to_json()}});
  return {{"rows", rj}, {"ratio", ratio}, {"h", h}};
}

FreqSweepReport freq_sweep(const OperatorSetup& s, const std::vector<std::pair<double, double>>& thetas) {
  if (thetas.empty()) throw PreconditionError("empty frequency grid");
  double eps = s.cov.epsilon;
  FieldContext fc = make_field(s, eps);
  std::vector<PairingOperator> ops{PairingOperator(make_operator_config(s, s.lambda), fc.lattice)};
  std::vector<TwoPointFunctional> Fs;
  for (auto [tx, ty] : thetas) Fs.push_back(s.functional(tx, ty));
  auto vals = sample_operators(s, fc, ops, Fs, s.seed);
  FreqSweepReport rep;
  rep.h = s.step(eps);
  double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
  for (std::size_t t = 0; t < thetas.size(); ++t) {
    ThetaRow row;
    row.eps = eps;
    row.lambda = s.lambda;
    row.theta_x = thetas[t].first;
    row.theta_y = thetas[t].second;
    row.est = moment_norm(vals[0][t], s.n, mix_seed(s.seed, 100 + t));
    if (row.est.value > 0.0) {
      lo = std::min(lo, row.est.value);
      hi = std::max(hi, row.est.value);
    }
    rep.rows.push_back(row);
  }
  rep.ratio = hi > 0.0 ? hi / lo : 0.0;
  return rep;
}

json DominationFit::to_json() const {
  return {{"eps_slope", eps_slope}, {"lambda_slope", lambda_slope}, {"diag_slope", diag_slope},
          {"max_ratio", max_ratio}, {"finite", finite},         {"dominated", dominated}};
}

DominationFit domination_gate(const std::vector<double>& eps, const std::vector<double>& lambda, const std::vector<double>& ratio,
                              double tol) {
  DominationFit d;
  std::vector<std::vector<double>> X;
  std::vector<double> y;
  bool lambda_varies = false, eps_varies = false;
  for (std::size_t i = 0; i < ratio.size(); ++i) {
    if (!std::isfinite(ratio[i]) || ratio[i] < 0.0) {
      d.finite = false;
      continue;
    }
    d.max_ratio = std::max(d.max_ratio, ratio[i]);
    if (ratio[i] == 0.0) continue;
    X.push_back({std::log(eps[i]), std::log(lambda[i])});
    y.push_back(std::log(ratio[i]));
    if (lambda[i] != lambda[0]) lambda_varies = true;
    if (eps[i] != eps[0]) eps_varies = true;
  }
  if (!d.finite || y.size() < 2) return d;
  if (eps_varies && lambda_varies && y.size() >= 3) {
    LinearFit f = ols(X, y);
    d.eps_slope = f.coef[1];
    d.lambda_slope = f.coef[2];
  } else if (eps_varies) {
    std::vector<std::vector<double>> X1;
    for (auto& r : X) X1.push_back({r[0]});
    d.eps_slope = ols(X1, y).coef[1];
  } else if (lambda_varies) {
    std::vector<std::vector<double>> X1;
    for (auto& r : X) X1.push_back({r[1]});
    d.lambda_slope = ols(X1, y).coef[1];
  }
  d.diag_slope = d.eps_slope + d.lambda_slope;
  // ratio ~ eps^{eps_slope}: a negative slope means growth as eps -> 0
  d.dominated = d.eps_slope >= -tol && (!lambda_varies || !eps_varies || d.diag_slope >= -tol);
  return d;
}

json ScalingReport::to_json() const {
  json g = json::array();
  for (const auto& p : grid)
    g.push_back({{"eps", p.eps},
                 {"lambda", p.lambda},
                 {"theta_x", p.theta_x},
                 {"theta_y", p.theta_y},
                 {"estimate", p.est.to_json()},
                 {"bound", p.bound},
                 {"ratio", p.ratio},
                 {"flagged", p.flagged}});
  return {{"grid", g},
          {"a", a},
          {"b", b},
          {"eta", eta},
          {"eps_slope", eps_slope},
          {"eps_slope_se", eps_slope_se},
          {"lambda_slope", lambda_slope},
          {"lambda_slope_se", lambda_slope_se},
          {"C", C},
          {"domination", domination.to_json()}};
}

namespace {
void check_geometric(const std::vector<double>& g, const char* name) {
  if (g.size() < 4) throw PreconditionError(std::string(name) + " grid needs at least 4 points");
  std::vector<double> s = g;
  std::sort(s.begin(), s.end());
  for (std::size_t i = 1; i < s.size(); ++i)
    if (s[i] < 2.0 * s[i - 1] * (1.0 - 1e-9)) throw PreconditionError(std::string(name) + " grid ratio below 2");
}
}  // namespace

ScalingReport scaling_scan(const OperatorSetup& s, const std::vector<double>& eps_grid, const std::vector<double>& lambda_grid,
                           const std::vector<std::pair<double, double>>& thetas, double eta) {
  check_geometric(eps_grid, "eps");
  check_geometric(lambda_grid, "lambda");
  if (thetas.empty()) throw PreconditionError("empty frequency grid");
  ScalingReport rep;
  rep.a = s.cov.alpha * (s.m1 + s.m2) / 2.0;
  rep.b = s.gamma - rep.a;
  rep.eta = eta;
  std::vector<TwoPointFunctional> Fs;
  for (auto [tx, ty] : thetas) Fs.push_back(s.functional(tx, ty));
  for (std::size_t ie = 0; ie < eps_grid.size(); ++ie) {
    double eps = eps_grid[ie];
    FieldContext fc = make_field(s, eps);
    std::vector<PairingOperator> ops;
    for (double lam : lambda_grid) ops.emplace_back(make_operator_config(s, lam), fc.lattice);
    auto vals = sample_operators(s, fc, ops, Fs, mix_seed(s.seed, ie));
    for (std::size_t il = 0; il < lambda_grid.size(); ++il) {
      ScalingPoint best;
      best.eps = eps;
      best.lambda = lambda_grid[il];
      for (std::size_t t = 0; t < thetas.size(); ++t) {
        MomentEstimate m = moment_norm(vals[il][t], s.n, mix_seed(s.seed, 1000 * (ie + 1) + 10 * il + t));
        if (t == 0 || m.value > best.est.value) {
          best.est = m;
          best.theta_x = thetas[t].first;
          best.theta_y = thetas[t].second;
        }
      }
      best.flagged = !(best.est.ci_lo > 0.0);
      best.bound = std::pow(eps, rep.a - eta) * std::pow(best.lambda, rep.b - eta);
      best.ratio = best.est.value / best.bound;
      rep.grid.push_back(best);
    }
  }
  std::vector<std::vector<double>> X;
  std::vector<double> y, ge, gl, gr;
  for (const auto& p : rep.grid) {
    if (p.flagged) continue;
    X.push_back({std::log(p.eps), std::log(p.lambda)});
    y.push_back(std::log(p.est.value));
    ge.push_back(p.eps);
    gl.push_back(p.lambda);
    gr.push_back(p.ratio);
    rep.C = std::max(rep.C, p.ratio);
  }
  if (y.size() >= 4) {
    LinearFit f = ols(X, y);
    rep.eps_slope = f.coef[1];
    rep.lambda_slope = f.coef[2];
    rep.eps_slope_se = f.stderr_[1];
    rep.lambda_slope_se = f.stderr_[2];
  }
  rep.domination = domination_gate(ge, gl, gr, eta);
  return rep;
}

TwoGridCheck operator_two_grid(const OperatorSetup& s, double theta_x, double theta_y, std::uint64_t index) {
  double eps = s.cov.epsilon;
  OperatorSetup fine = s;
  fine.h = s.step(eps) / 2.0;
  FieldContext fc = make_field(fine, eps);
  FieldSample fs = sample_field(fc.spectrum, s.seed, index);
  FieldSample cs = subsample(fs);
  OperatorConfig oc = make_operator_config(s, s.lambda);
  oc.functional = s.functional(theta_x, theta_y);
  TwoGridCheck r;
  r.fine = PairingOperator(oc, fs.lattice).apply(fs);
  r.coarse = PairingOperator(oc, cs.lattice).apply(cs);
  double den = std::max(std::fabs(r.fine), std::numeric_limits<double>::min());
  r.rel_diff = std::fabs(r.fine - r.coarse) / den;
  return r;
}

// ---- second moments ----

double normalized_covariance(const CovarianceSpec& cov, double lag) {
  return std::pow(cov.epsilon, cov.alpha) * target_covariance(cov, std::fabs(lag));
}

namespace {

struct GradedLevel {
  int levels, nodes;
};
constexpr GradedLevel kLevels[] = {{12, 8}, {20, 10}, {28, 14}, {36, 18}};

double factorial(int n) { return std::tgamma(n + 1.0); }

template <class Outer>
QuadratureResult refine(const Outer& eval) {
  QuadratureResult r;
  double prev = eval(kLevels[0]);
  for (std::size_t i = 1; i < std::size(kLevels); ++i) {
    double cur = eval(kLevels[i]);
    double rel = std::fabs(cur - prev) / std::max(std::fabs(cur), std::numeric_limits<double>::min());
    r.value = cur;
    r.coarse = prev;
    r.rel_diff = rel;
    r.refinements = static_cast<int>(i) - 1;
    if (rel <= 0.10 || cur == 0.0) return r;
    prev = cur;
  }
  throw ResolutionError("second-moment quadrature: two-grid disagreement above 10% after refinement");
}

}  // namespace

QuadratureResult second_moment_G(double x, const RenormKernel& k, int m2, const CovarianceSpec& cov) {
  if (k.geometry().d() != 1) throw DimensionError("second_moment_G is implemented for d = 1");
  const bool ysing = k.re() >= 1;
  const double R = 2.0;
  auto absK = [&](double y) { return std::fabs(k.K_1d(x, y)); };
  auto eval = [&](GradedLevel lv) {
    auto inner = [&](double v) {
      double a = std::max(-R, -R - v), b = std::min(R, R - v);
      if (!(b > a)) return 0.0;
      std::vector<double> sing{x, x - v};
      if (ysing) {
        sing.push_back(0.0);
        sing.push_back(-v);
      }
      return integrate_graded([&](double y1) { return absK(y1) * absK(y1 + v); }, a, b, sing, lv.levels, lv.nodes);
    };
    std::vector<double> osing{0.0, x, -x};
    double I = integrate_graded([&](double v) { return std::pow(normalized_covariance(cov, v), m2) * inner(v); }, -2 * R, 2 * R,
                                osing, lv.levels, lv.nodes);
    return std::sqrt(std::max(0.0, factorial(m2) * I));
  };
  return refine(eval);
}

QuadratureResult second_moment_H(double y, const RenormKernel& k, const TestFunction& test, int m1, const CovarianceSpec& cov) {
  if (k.geometry().d() != 1) throw DimensionError("second_moment_H is implemented for d = 1");
  const double c = test.center()[0], lam = test.scale();
  auto w = [&](double x) {
    double p = test.eval(Point{x});
    if (p == 0.0) return 0.0;
    return std::fabs(k.K_1d(x, y) * p);
  };
  auto eval = [&](GradedLevel lv) {
    auto inner = [&](double v) {
      double a = std::max(c - lam, c - lam - v), b = std::min(c + lam, c + lam - v);
      if (!(b > a)) return 0.0;
      return integrate_graded([&](double x1) { return w(x1) * w(x1 + v); }, a, b, {y, y - v}, lv.levels, lv.nodes);
    };
    std::vector<double> osing{0.0};
    double I = integrate_graded([&](double v) { return std::pow(normalized_covariance(cov, v), m1) * inner(v); }, -2 * lam, 2 * lam,
                                osing, lv.levels, lv.nodes);
    return std::sqrt(std::max(0.0, factorial(m1) * I));
  };
  return refine(eval);
}

double bound_G(double x, double eps, double gamma, double alpha, int m2, double eta) {
  double h = alpha * m2 / 2.0;
  if (gamma <= h) return std::pow(eps, gamma - eta);
  return std::pow(eps, h) * std::pow(std::fabs(x), gamma - h - eta);
}

double bound_H(double y, double eps, double lambda, double gamma, double alpha, int m1, int re, double total, double eta) {
  double h = alpha * m1 / 2.0;
  double ay = std::fabs(y);
  if (ay > 2.0 * lambda) return std::pow(eps, h) * std::pow(lambda, re - h) / std::pow(ay, total - gamma + re);
  double g = std::min(gamma, h);
  double b = std::pow(eps, g - eta) * std::pow(lambda, gamma - total - g - eta);
  if (re >= 1) b += std::pow(eps, h) * std::pow(lambda, re - h - 1.0) / std::pow(ay, total - gamma + re - 1.0);
  return b;
}

json EpsSweepReport::to_json() const {
  return {{"what", what},       {"point", point},         {"lambda", lambda},         {"eps", eps},
          {"values", values},   {"bounds", bounds},       {"ratios", ratios},         {"slope", slope},
          {"slope_se", slope_se}, {"predicted", predicted}, {"slope_ok", slope_ok}, {"domination", domination.to_json()}};
}

namespace {
void finish_sweep(EpsSweepReport& r, double eta, double slope_tol) {
  LinearFit f = loglog_fit(r.eps, r.values);
  r.slope = f.coef[1];
  r.slope_se = f.stderr_[1];
  r.slope_ok = std::fabs(r.slope - r.predicted) <= slope_tol;
  std::vector<double> lam(r.eps.size(), r.lambda);
  r.domination = domination_gate(r.eps, lam, r.ratios, eta);
}
}  // namespace

EpsSweepReport sweep_G(double x, const RenormKernel& k, double alpha, int m2, const std::vector<double>& eps_grid, double eta,
                       CovProfile profile, double slope_tol) {
  EpsSweepReport r;
  r.what = "G";
  r.point = x;
  r.lambda = 1.0;
  double h = alpha * m2 / 2.0;
  r.predicted = k.gamma() <= h ? k.gamma() : h;
  for (double eps : eps_grid) {
    CovarianceSpec cs;
    cs.alpha = alpha;
    cs.epsilon = eps;
    cs.profile = profile;
    double v = second_moment_G(x, k, m2, cs).value;
    double b = bound_G(x, eps, k.gamma(), alpha, m2, eta);
    r.eps.push_back(eps);
    r.values.push_back(v);
    r.bounds.push_back(b);
    r.ratios.push_back(v / b);
  }
  finish_sweep(r, eta, slope_tol);
  return r;
}

EpsSweepReport sweep_H(double y, double lambda, const RenormKernel& k, double alpha, int m1, const std::vector<double>& eps_grid,
                       double eta, CovProfile profile, double slope_tol) {
  EpsSweepReport r;
  r.what = "H";
  r.point = y;
  r.lambda = lambda;
  double h = alpha * m1 / 2.0;
  if (std::fabs(y) > 2.0 * lambda)
    r.predicted = h;
  else
    r.predicted = k.re() >= 1 ? std::min(h, std::min(k.gamma(), h)) : std::min(k.gamma(), h);
  TestFunction tf(k.geometry(), Point{0.0}, lambda);
  for (double eps : eps_grid) {
    CovarianceSpec cs;
    cs.alpha = alpha;
    cs.epsilon = eps;
    cs.profile = profile;
    double v = second_moment_H(y, k, tf, m1, cs).value;
    double b = bound_H(y, eps, lambda, k.gamma(), alpha, m1, k.re(), k.geometry().total(), eta);
    r.eps.push_back(eps);
    r.values.push_back(v);
    r.bounds.push_back(b);
    r.ratios.push_back(v / b);
  }
  finish_sweep(r, eta, slope_tol);
  return r;
}

// ---- volume lemmas ----

namespace {

// Radius with density proportional to r^e on [a, b]; normalizer returned by radial_mass.
double radial_draw(double e, double a, double b, double u) {
  double p = e + 1.0;
  if (std::fabs(p) < 1e-12) return a * std::pow(b / a, u);
  double A = std::pow(a, p), B = std::pow(b, p);
  return std::pow(A + u * (B - A), 1.0 / p);
}

double radial_mass(double e, double a, double b) {
  double p = e + 1.0;
  if (a <= 0.0 && p <= 1e-12) throw PreconditionError("radial weight not integrable at the origin");
  if (std::fabs(p) < 1e-12) return std::log(b / a);
  return (std::pow(b, p) - std::pow(a, p)) / p;
}

// Point on the sphere {|y|_s = r}: face of axis i chosen with weight s_i.
void shell_point(const ScalingGeometry& g, double r, Stream& rs, Point& out) {
  const auto& s = g.s();
  double u = rs.uniform() * g.total();
  std::size_t face = s.size() - 1;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (u < s[i]) {
      face = i;
      break;
    }
    u -= s[i];
  }
  out.resize(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    double half = std::pow(r, s[i]);
    if (i == face)
      out[i] = rs.uniform() < 0.5 ? -half : half;
    else
      out[i] = (2.0 * rs.uniform() - 1.0) * half;
  }
}

// int_{S^c} prod_i 1_{a <= |y_i| <= b} |y_i|^{-q} dy, every draw equally weighted.
VolumePoint weighted_volume(int n, const ScalingGeometry& g, double q, double a, double b, double Leps, long n_mc,
                            std::uint64_t seed, unsigned workers) {
  int m = 2 * n;
  double e = g.total() - 1.0 - q;
  double surface = std::pow(2.0, static_cast<double>(g.d())) * g.total();
  double Z = surface * radial_mass(e, a, b);
  const std::size_t chunks = 64;
  std::vector<long> hits(chunks, 0);
  parallel_for(chunks, workers, [&](std::size_t c) {
    Stream rs(seed, c, stream_tag::mc);
    std::vector<Point> pts(m);
    long lo = static_cast<long>(c) * n_mc / static_cast<long>(chunks);
    long hi = static_cast<long>(c + 1) * n_mc / static_cast<long>(chunks);
    for (long t = lo; t < hi; ++t) {
      for (auto& p : pts) shell_point(g, radial_draw(e, a, b, rs.uniform()), rs, p);
      if (!in_S2n(pts, Leps, g)) ++hits[c];
    }
  });
  VolumePoint v;
  for (long h : hits) v.hits += h;
  v.n_mc = n_mc;
  double Zm = std::pow(Z, m);
  v.estimate = Zm * v.hits / static_cast<double>(n_mc);
  auto [lo, hi] = wilson_interval(v.hits, n_mc);
  v.ci_lo = Zm * lo;
  v.ci_hi = Zm * hi;
  return v;
}

}  // namespace

json VolumeLemmaReport::to_json() const {
  json p = json::array();
  for (const auto& v : points)
    p.push_back({{"lemma", v.lemma},
                 {"eps", v.eps},
                 {"lambda", v.lambda},
                 {"estimate", v.estimate},
                 {"ci_lo", v.ci_lo},
                 {"ci_hi", v.ci_hi},
                 {"bound", v.bound},
                 {"ratio", v.ratio},
                 {"hits", v.hits},
                 {"n_mc", v.n_mc}});
  return {{"n", n}, {"re", re}, {"points", p}, {"lemma1", lemma1.to_json()}, {"lemma2", lemma2.to_json()}, {"lemma2_skipped", lemma2_skipped}};
}

VolumeLemmaReport volume_lemma_check(int n, const RenormKernel& k, double alpha, int m2, const std::vector<double>& eps_grid,
                                     const std::vector<double>& lambda_grid, double eta, long n_mc, double L, std::uint64_t seed,
                                     unsigned workers, double tol) {
  if (n < 1 || 2 * n > 4) throw PreconditionError("volume_lemma_check needs 2n <= 4");
  const ScalingGeometry& g = k.geometry();
  const double S = g.total(), gam = k.gamma();
  const int re = k.re();
  VolumeLemmaReport rep;
  rep.n = n;
  rep.re = re;
  rep.lemma2_skipped = re < 1;
  std::vector<double> e1, l1, r1, e2, l2, r2;
  std::uint64_t tag = 0;
  for (double eps : eps_grid)
    for (double lam : lambda_grid) {
      if (!(2.0 * lam < 2.0)) throw PreconditionError("lambda must be below 1");
      double Le = L * eps;
      VolumePoint v = weighted_volume(n, g, S - gam + re, 2.0 * lam, 2.0, Le, n_mc, mix_seed(seed, tag++), workers);
      v.lemma = 1;
      v.eps = eps;
      v.lambda = lam;
      v.bound = std::pow(lam, 2.0 * n * (gam - re - eta)) * std::pow(Le / lam, n * alpha * m2);
      v.ratio = v.estimate / v.bound;
      rep.points.push_back(v);
      e1.push_back(eps);
      l1.push_back(lam);
      r1.push_back(v.ratio);
      if (rep.lemma2_skipped) continue;
      VolumePoint w = weighted_volume(n, g, S - gam + re - 1.0, 0.0, 2.0 * lam, Le, n_mc, mix_seed(seed, tag++), workers);
      w.lemma = 2;
      w.eps = eps;
      w.lambda = lam;
      w.bound = std::pow(std::min(Le, lam), 2.0 * n * (gam - re + 1.0 - eta));
      w.ratio = w.estimate / w.bound;
      rep.points.push_back(w);
      e2.push_back(eps);
      l2.push_back(lam);
      r2.push_back(w.ratio);
    }
  rep.lemma1 = domination_gate(e1, l1, r1, tol);
  if (!rep.lemma2_skipped) rep.lemma2 = domination_gate(e2, l2, r2, tol);
  return rep;
}

json VolumeScSweep::to_json() const {
  json p = json::array();
  for (const auto& v : points)
    p.push_back({{"eps", v.eps}, {"lambda", v.lambda}, {"estimate", v.estimate}, {"ci_lo", v.ci_lo}, {"ci_hi", v.ci_hi},
                 {"bound", v.bound}, {"ratio", v.ratio}, {"hits", v.hits}, {"n_mc", v.n_mc}});
  return {{"points", p}, {"domination", domination.to_json()}};
}

VolumeScSweep volume_sc_sweep(int n, const ScalingGeometry& g, const std::vector<double>& eps_grid,
                              const std::vector<double>& lambda_grid, long n_mc, double L, std::uint64_t seed, double tol) {
  VolumeScSweep rep;
  std::vector<double> e, l, r;
  std::uint64_t tag = 0;
  for (double eps : eps_grid)
    for (double lam : lambda_grid) {
      VolumeEstimate ve = volume_Sc(n, eps, lam, g, n_mc, L, mix_seed(seed, tag++));
      VolumePoint v;
      v.eps = eps;
      v.lambda = lam;
      v.estimate = ve.estimate;
      v.ci_lo = ve.ci_lo;
      v.ci_hi = ve.ci_hi;
      v.bound = ve.bound;
      v.ratio = ve.ratio;
      v.hits = ve.hits;
      v.n_mc = ve.n_mc;
      rep.points.push_back(v);
      e.push_back(eps);
      l.push_back(lam);
      r.push_back(v.ratio);
    }
  rep.domination = domination_gate(e, l, r, tol);
  return rep;
}

}  // namespace tchaos
