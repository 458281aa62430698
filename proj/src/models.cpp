#include "tchaos/models.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "tchaos/chaos.hpp"
#include "tchaos/errors.hpp"
#include "tchaos/fft.hpp"
#include "tchaos/kernel.hpp"
#include "tchaos/parallel.hpp"
#include "tchaos/rng.hpp"
#include "tchaos/stats.hpp"

namespace tchaos {

using json = nlohmann::json;

ModelFamily parse_family(const std::string& s) {
  if (s == "kpz") return ModelFamily::kpz;
  if (s == "phi43") return ModelFamily::phi43;
  throw ConfigError("unknown model family: " + s);
}

const char* family_name(ModelFamily f) { return f == ModelFamily::kpz ? "kpz" : "phi43"; }

ScalingGeometry model_geometry(ModelFamily f) {
  if (f == ModelFamily::kpz) return ScalingGeometry({2.0, 1.0});
  return ScalingGeometry({2.0, 1.0, 1.0, 1.0});
}

double heat_stencil_value(const Point& z, double dt, double cutoff, bool x_derivative) {
  if (z[0] < 0.0) return 0.0;
  const double t = z[0] + 0.5 * dt;
  double r2 = 0.0, m = std::sqrt(t);
  for (std::size_t a = 1; a < z.size(); ++a) {
    r2 += z[a] * z[a];
    m = std::max(m, std::fabs(z[a]));
  }
  double chi = cutoff_chi(m / cutoff);
  if (chi == 0.0) return 0.0;
  const double n = static_cast<double>(z.size() - 1);
  double p = std::pow(4.0 * std::numbers::pi * t, -0.5 * n) * std::exp(-r2 / (4.0 * t));
  if (x_derivative) p *= -z[1] / (2.0 * t);
  return chi * p;
}

namespace {

std::size_t pow2_at_least(double v) {
  std::size_t n = 8;
  while (static_cast<double>(n) < v) n *= 2;
  return n;
}

// Raw per-axis index -> offset coordinate in (-period/2, period/2].
void wrapped_coords(const Lattice& L, std::size_t flat, double* out) {
  for (std::size_t a = L.counts.size(); a-- > 0;) {
    std::size_t n = L.counts[a];
    std::size_t k = flat % n;
    flat /= n;
    long s = k <= n / 2 ? static_cast<long>(k) : static_cast<long>(k) - static_cast<long>(n);
    out[a] = static_cast<double>(s) * L.step[a];
  }
}

}  // namespace

ModelField::ModelField(const ModelFieldSpec& spec) : spec_(spec) {
  const double eps = spec_.epsilon;
  if (!(eps > 0.0 && eps < 1.0)) throw PreconditionError("epsilon must lie in (0,1)");
  if (spec_.h <= 0.0) spec_.h = 0.5 * eps;
  if (eps < 2.0 * spec_.h) throw ResolutionError("epsilon below twice the lattice step");
  if (!(spec_.cutoff > 0.0)) throw PreconditionError("cutoff must be positive");
  ScalingGeometry g = model_geometry(spec_.family);
  const double c = spec_.cutoff, h = spec_.h;
  std::vector<std::size_t> counts(g.d());
  for (std::size_t a = 0; a < g.d(); ++a) {
    double need = a == 0 ? c * c + 2.0 * eps * eps : 2.0 * (c + eps);
    need = std::max(need * 1.25, std::pow(spec_.min_period, g.s()[a]));
    counts[a] = pow2_at_least(need / std::pow(h, g.s()[a]));
  }
  lattice_ = std::make_shared<const Lattice>(periodic_lattice(g, h, counts));
  plans_ = make_fft_plans(counts);

  const Lattice& L = *lattice_;
  const double cell = L.cell_volume();
  const double dt = L.step[0];
  const bool deriv = spec_.family == ModelFamily::kpz;
  auto P = stencil([&](const Point& z) { return heat_stencil_value(z, dt, c, deriv); });
  auto rho = stencil([&](const Point& z) {
    Point u(z.size());
    u[0] = z[0] / (eps * eps);
    for (std::size_t a = 1; a < z.size(); ++a) u[a] = z[a] / eps;
    return bump_profile(u);
  });
  double mass = pairwise_sum(rho) * cell;
  for (double& v : rho) v /= mass;

  auto Ph = transform(std::move(P));
  auto Rh = transform(std::move(rho));
  const double N = static_cast<double>(L.size());
  transfer_.resize(Ph.size());
  std::vector<std::complex<double>> Sh(Ph.size());
  for (std::size_t i = 0; i < Ph.size(); ++i) {
    Sh[i] = Ph[i] * Rh[i] * cell;
    transfer_[i] = Sh[i] * std::sqrt(cell) / N;
  }
  std::vector<double> S(L.size());
  fft_inverse(*plans_, Sh.data(), S.data());
  double acc = 0.0;
  for (double v : S) acc += (v / N) * (v / N);
  psi_var_ = acc * cell;
}

std::vector<double> ModelField::stencil(const std::function<double(const Point&)>& fn) const {
  const Lattice& L = *lattice_;
  std::vector<double> out(L.size());
  Point z(L.counts.size());
  for (std::size_t f = 0; f < out.size(); ++f) {
    wrapped_coords(L, f, z.data());
    out[f] = fn(z);
  }
  return out;
}

std::vector<std::complex<double>> ModelField::transform(std::vector<double> f) const {
  if (f.size() != lattice_->size()) throw DimensionError("array does not match the model lattice");
  std::vector<std::complex<double>> out(fft_complex_size(*plans_));
  fft_forward(*plans_, f.data(), out.data());
  return out;
}

std::vector<double> ModelField::convolve(const std::vector<double>& f, const std::vector<std::complex<double>>& kernel_hat) const {
  auto fh = transform(f);
  const double scale = lattice_->cell_volume() / static_cast<double>(lattice_->size());
  for (std::size_t i = 0; i < fh.size(); ++i) fh[i] *= kernel_hat[i] * scale;
  std::vector<double> out(lattice_->size());
  fft_inverse(*plans_, fh.data(), out.data());
  return out;
}

std::size_t ModelField::origin_flat() const { return lattice_->flat(lattice_->origin); }

FieldSample ModelField::sample(std::uint64_t seed, std::uint64_t index) const {
  const Lattice& L = *lattice_;
  Stream rs(seed, index, stream_tag::model);
  std::vector<double> g(L.size());
  for (double& v : g) v = rs.normal();
  auto gh = transform(std::move(g));
  for (std::size_t i = 0; i < gh.size(); ++i) gh[i] *= transfer_[i];
  FieldSample s;
  s.lattice = lattice_;
  s.values.resize(L.size());
  fft_inverse(*plans_, gh.data(), s.values.data());
  s.x_scale = std::sqrt(spec_.epsilon);
  s.sigma2 = sigma2();
  return s;
}

// ---- first-order objects ----

ModelSymbol parse_symbol(const std::string& s) {
  if (s == "0'" || s == "s0") return ModelSymbol::s0;
  if (s == "1'" || s == "s1") return ModelSymbol::s1;
  if (s == "2'" || s == "s2") return ModelSymbol::s2;
  if (s == "3'" || s == "s3") return ModelSymbol::s3;
  throw ConfigError("unknown symbol: " + s);
}

const char* symbol_name(ModelSymbol s) {
  switch (s) {
    case ModelSymbol::s0: return "0'";
    case ModelSymbol::s1: return "1'";
    case ModelSymbol::s2: return "2'";
    case ModelSymbol::s3: return "3'";
  }
  return "?";
}

json ModelObjectSpec::to_json() const {
  return {{"family", family_name(family)}, {"symbol", symbol_name(symbol)}, {"nonlinearity", nonlinearity.to_json()},
          {"a", a}, {"epsilon", epsilon}, {"sigma2", sigma2},
          {"renorm", renorm == Renorm::analytic ? "analytic" : "empirical"}, {"C", C}};
}

namespace {

// Derivative order, prefactor, and chaos orders removed by the renormalization.
struct SymbolForm {
  int ell;
  double pref;
  std::vector<int> removed;
};

SymbolForm symbol_form(const ModelObjectSpec& s) {
  const double a = s.a, e = s.epsilon;
  if (s.family == ModelFamily::kpz) {
    switch (s.symbol) {
      case ModelSymbol::s0: return {2, 1.0 / (2.0 * a), {0}};
      case ModelSymbol::s1: return {1, 1.0 / (2.0 * a * std::sqrt(e)), {}};
      case ModelSymbol::s2: return {0, 1.0 / (a * e), {0}};
      case ModelSymbol::s3: break;
    }
    throw PreconditionError("symbol 3' does not belong to the KPZ family");
  }
  switch (s.symbol) {
    case ModelSymbol::s0: return {3, 1.0 / (6.0 * a), {0}};
    case ModelSymbol::s1: return {2, 1.0 / (6.0 * a * std::sqrt(e)), {}};
    case ModelSymbol::s2: return {1, 1.0 / (3.0 * a * e), {0}};
    case ModelSymbol::s3: return {0, 1.0 / (a * e * std::sqrt(e)), {1}};
  }
  return {0, 0.0, {}};
}

// The renormalized part of <2'> shared by <2'> and <3'>.
SymbolForm c_form(const ModelObjectSpec& s) {
  ModelObjectSpec t = s;
  t.symbol = s.symbol == ModelSymbol::s0 ? ModelSymbol::s0 : ModelSymbol::s2;
  return symbol_form(t);
}

double raw_value(const ModelObjectSpec& s, const SymbolForm& f, double X) { return f.pref * s.nonlinearity(X, f.ell); }

}  // namespace

ModelObjectSpec make_object(ModelFamily family, ModelSymbol symbol, const NonlinearitySpec& F, const ModelField& field,
                            Renorm renorm) {
  if (field.spec().family != family) throw PreconditionError("field family does not match the object family");
  ModelObjectSpec s;
  s.family = family;
  s.symbol = symbol;
  s.nonlinearity = F;
  s.epsilon = field.spec().epsilon;
  s.sigma2 = field.sigma2();
  s.renorm = renorm;
  const int order = family == ModelFamily::kpz ? 2 : 3;
  if (F.k < order) throw PreconditionError("nonlinearity not smooth enough for this family");
  s.a = coupling_constant(F, s.sigma2, order);
  if (s.a == 0.0) throw PreconditionError("coupling constant vanishes");
  symbol_form(s);  // family/symbol check
  SymbolForm cf = c_form(s);
  if (symbol == ModelSymbol::s0)
    s.C = 1.0;
  else if (symbol == ModelSymbol::s1)
    s.C = 0.0;
  else
    s.C = cf.pref * coupling_constant(F, s.sigma2, cf.ell);
  return s;
}

double set_empirical_constant(ModelObjectSpec& spec, const ModelField& field, long n_samples, std::uint64_t seed,
                              unsigned workers) {
  spec.renorm = Renorm::empirical;
  if (spec.symbol == ModelSymbol::s1) {
    spec.C = 0.0;
    return 0.0;
  }
  if (n_samples < 2) throw PreconditionError("empirical renormalization needs at least two samples");
  SymbolForm cf = c_form(spec);
  std::vector<double> means(static_cast<std::size_t>(n_samples));
  parallel_for(means.size(), workers, [&](std::size_t i) {
    FieldSample s = field.sample(seed, i);
    std::vector<double> v(s.values.size());
    for (std::size_t j = 0; j < v.size(); ++j) v[j] = raw_value(spec, cf, s.x_scale * s.values[j]);
    means[i] = mean(v);
  });
  double m = mean(means), ss = 0.0;
  for (double v : means) ss += (v - m) * (v - m);
  spec.C = m;
  return std::sqrt(ss / static_cast<double>(means.size() - 1) / static_cast<double>(means.size()));
}

double eval_object(const ModelObjectSpec& spec, const FieldSample& sample, std::size_t site) {
  SymbolForm f = symbol_form(spec);
  const double psi = sample.values.at(site);
  const double X = sample.x_scale * psi;
  double v = raw_value(spec, f, X);
  switch (spec.symbol) {
    case ModelSymbol::s0:
    case ModelSymbol::s2: return v - spec.C;
    case ModelSymbol::s1: return v;
    case ModelSymbol::s3: return v - 3.0 * spec.C * psi;
  }
  return v;
}

double polynomial_object_oracle(const ModelObjectSpec& spec, const FieldSample& sample, std::size_t site) {
  const NonlinearitySpec& F = spec.nonlinearity;
  if (F.kind != NonlinearityKind::polynomial || F.delta != 0.0) throw PreconditionError("oracle needs an unmollified polynomial");
  if (spec.renorm != Renorm::analytic) throw PreconditionError("oracle needs analytic renormalization");
  SymbolForm f = symbol_form(spec);
  std::vector<double> c = F.coeffs;
  for (int d = 0; d < f.ell; ++d) {
    if (c.size() <= 1) {
      c.assign(1, 0.0);
      break;
    }
    for (std::size_t i = 1; i < c.size(); ++i) c[i - 1] = static_cast<double>(i) * c[i];
    c.pop_back();
  }
  std::vector<double> b = wick_expand_polynomial(c, spec.sigma2);
  const double X = sample.x_scale * sample.values.at(site);
  double acc = 0.0;
  for (std::size_t k = 0; k < b.size(); ++k) {
    if (std::find(f.removed.begin(), f.removed.end(), static_cast<int>(k)) != f.removed.end()) continue;
    acc += b[k] * wick_power(X, static_cast<int>(k), spec.sigma2);
  }
  return f.pref * acc;
}

// ---- Hoelder norm ----

json HolderNormEstimate::to_json() const {
  return {{"alpha", alpha}, {"value", value}, {"lambda_at", lambda_at}, {"center_at", center_at}, {"levels", levels}, {"stride", stride}};
}

HolderNormEstimate holder_norm(const ModelField& field, const std::vector<double>& f, double alpha, int lambda_levels,
                               std::size_t stride, double lambda_max) {
  if (!(alpha < 0.0)) throw PreconditionError("holder_norm needs alpha < 0");
  if (stride == 0) throw PreconditionError("stride must be positive");
  const Lattice& L = *field.lattice();
  const ScalingGeometry& g = L.geometry;
  HolderNormEstimate est;
  est.alpha = alpha;
  est.levels = lambda_levels;
  est.stride = stride;
  std::vector<std::size_t> centers;
  for (std::size_t fl = 0; fl < L.size(); ++fl) {
    std::size_t r = fl;
    bool on = true;
    for (std::size_t a = L.counts.size(); a-- > 0;) {
      if ((r % L.counts[a]) % stride != 0) on = false;
      r /= L.counts[a];
    }
    if (on) centers.push_back(fl);
  }
  for (int k = 0; k < lambda_levels; ++k) {
    double lambda = lambda_max * std::ldexp(1.0, -k);
    if (lambda < 2.0 * L.h) break;
    for (std::size_t a = 0; a < g.d(); ++a)
      if (std::pow(lambda, g.s()[a]) > L.extent[a]) throw PreconditionError("test function wider than the period");
    TestFunction phi(g, Point(g.d(), 0.0), lambda);
    auto st = field.stencil([&](const Point& z) {
      Point m(z.size());
      for (std::size_t a = 0; a < z.size(); ++a) m[a] = -z[a];
      return phi.eval(m);
    });
    auto pair = field.convolve(f, field.transform(std::move(st)));
    const double w = std::pow(lambda, -alpha);
    for (std::size_t c : centers) {
      double v = w * std::fabs(pair[c]);
      if (v > est.value) {
        est.value = v;
        est.lambda_at = lambda;
        est.center_at = c;
      }
    }
  }
  return est;
}

// ---- remainder pairings ----

namespace {

struct TestWeights {
  std::vector<std::size_t> sites;
  std::vector<double> w;  // phi^lambda(x) * cell
};

TestWeights test_weights(const ModelField& field, double lambda) {
  const Lattice& L = *field.lattice();
  if (lambda < 2.0 * L.h) throw ResolutionError("lambda below twice the lattice step");
  TestFunction phi(L.geometry, Point(L.geometry.d(), 0.0), lambda);
  for (std::size_t a = 0; a < L.geometry.d(); ++a)
    if (std::pow(lambda, L.geometry.s()[a]) > L.extent[a]) throw PreconditionError("test function wider than the period");
  TestWeights t;
  Point p(L.geometry.d());
  for (std::size_t f = 0; f < L.size(); ++f) {
    L.coords(f, p.data());
    double v = phi.eval(p);
    if (v != 0.0) {
      t.sites.push_back(f);
      t.w.push_back(v * L.cell_volume());
    }
  }
  if (t.sites.empty()) throw ResolutionError("test function support holds no lattice site");
  return t;
}

// H^{(ell)}(X) with its chaos components of order <= m removed.
struct Truncated {
  const NonlinearitySpec* F;
  int ell;
  std::vector<double> coeff;  // E H^{(k)}(X)/k!
  double sigma2;

  Truncated(const NonlinearitySpec& G, int l, int m, double s2) : F(&G), ell(l), sigma2(s2) {
    for (int k = 0; k <= m; ++k) coeff.push_back(coupling_constant(G, s2, l + k) * std::tgamma(l + k + 1.0) / std::tgamma(k + 1.0));
  }
  double operator()(double X) const {
    double v = (*F)(X, ell);
    for (std::size_t k = 0; k < coeff.size(); ++k) v -= coeff[k] * wick_power(X, static_cast<int>(k), sigma2);
    return v;
  }
};

double tab_radius(double sigma2) { return 12.0 * std::sqrt(sigma2) + 1.0; }

// The test function of scale lambda must fit in half a period.
ModelFieldSpec widened(const RemainderQuery& q) {
  ModelFieldSpec fs = q.field;
  fs.min_period = std::max(fs.min_period, 2.0 * q.lambda);
  return fs;
}

}  // namespace

MomentEstimate remainder_pairing(const RemainderQuery& q) {
  ModelField field(widened(q));
  const Lattice& L = *field.lattice();
  const bool kpz = q.field.family == ModelFamily::kpz;
  const double eps = q.field.epsilon, s2 = field.sigma2();
  const NonlinearitySpec& F = q.nonlinearity;
  if (q.delta < 0.0) throw PreconditionError("delta must be >= 0");
  if (q.delta == 0.0) return moment_norm(std::vector<double>(static_cast<std::size_t>(q.n_samples), 0.0), q.n, q.seed);
  NonlinearitySpec Fd = mollify(F, q.delta, tab_radius(s2));
  const double a = coupling_constant(F, s2, kpz ? 2 : 3);
  TestWeights tw = test_weights(field, q.lambda);

  // <2'1'>: K0 = d_x P (gamma = 1, r_e = 0). <3'2'>: K0 = P (gamma = 2, r_e = 1).
  const int re = kpz ? compute_re(1.0, 1.0, 2) : compute_re(2.0, 1.0, 3);
  const double dt = L.step[0];
  auto khat = field.transform(field.stencil([&](const Point& z) { return heat_stencil_value(z, dt, q.field.cutoff, kpz); }));
  const std::size_t origin = field.origin_flat();

  // x-factor T_(m1-1)(F^{(lx)}), y-factor T_(m2-1)(F^{(ly)}), times prefactors
  const int lx = 1, mx = kpz ? 0 : 1;
  const int ly = 0, my = kpz ? 1 : 2;
  const double px = kpz ? 1.0 : 1.0 / (3.0 * a * eps);
  const double py = kpz ? 1.0 : 1.0 / (a * eps * std::sqrt(eps));
  const double pref = kpz ? 1.0 / (2.0 * a * a * eps * std::sqrt(eps)) : 1.0;
  Truncated fx(F, lx, mx, s2), fy(F, ly, my, s2), fxd(Fd, lx, mx, s2), fyd(Fd, ly, my, s2);

  std::vector<double> vals(static_cast<std::size_t>(q.n_samples));
  parallel_for(vals.size(), q.workers, [&](std::size_t i) {
    FieldSample s = field.sample(q.seed, i);
    std::vector<double> g(L.size()), gd(L.size());
    for (std::size_t j = 0; j < L.size(); ++j) {
      double X = s.x_scale * s.values[j];
      g[j] = py * fy(X);
      gd[j] = py * fyd(X);
    }
    auto Kg = field.convolve(g, khat);
    auto Kgd = field.convolve(gd, khat);
    double k0 = re >= 1 ? Kg[origin] : 0.0, k0d = re >= 1 ? Kgd[origin] : 0.0;
    double acc = 0.0;
    for (std::size_t t = 0; t < tw.sites.size(); ++t) {
      std::size_t x = tw.sites[t];
      double X = s.x_scale * s.values[x];
      acc += tw.w[t] * (px * fx(X) * (Kg[x] - k0) - px * fxd(X) * (Kgd[x] - k0d));
    }
    vals[i] = pref * acc;
  });
  return moment_norm(vals, q.n, mix_seed(q.seed, 0x7e3a));
}

MomentEstimate mollification_gap(const RemainderQuery& q) {
  if (q.field.family != ModelFamily::kpz) throw PreconditionError("mollification_gap is defined for the KPZ family");
  ModelField field(widened(q));
  const double eps = q.field.epsilon, s2 = field.sigma2();
  if (q.delta < 0.0) throw PreconditionError("delta must be >= 0");
  if (q.delta == 0.0) return moment_norm(std::vector<double>(static_cast<std::size_t>(q.n_samples), 0.0), q.n, q.seed);
  const NonlinearitySpec& F = q.nonlinearity;
  NonlinearitySpec Fd = mollify(F, q.delta, tab_radius(s2));
  const double a = coupling_constant(F, s2, 2);
  const double pref = 1.0 / (2.0 * a * std::sqrt(eps));
  TestWeights tw = test_weights(field, q.lambda);
  std::vector<double> vals(static_cast<std::size_t>(q.n_samples));
  parallel_for(vals.size(), q.workers, [&](std::size_t i) {
    FieldSample s = field.sample(q.seed, i);
    double acc = 0.0;
    for (std::size_t t = 0; t < tw.sites.size(); ++t) {
      double X = s.x_scale * s.values[tw.sites[t]];
      acc += tw.w[t] * (F(X, 1) - Fd(X, 1));
    }
    vals[i] = pref * acc;
  });
  return moment_norm(vals, q.n, mix_seed(q.seed, 0x9a11));
}

json DeltaSweep::to_json() const {
  json p = json::array();
  for (const auto& x : points) p.push_back({{"eps", x.eps}, {"lambda", x.lambda}, {"delta", x.delta}, {"estimate", x.est.to_json()}});
  return {{"points", p}, {"slope", slope}, {"slope_se", slope_se}};
}

DeltaSweep remainder_sweep(const RemainderQuery& base, const std::vector<double>& eps_grid, double nu) {
  DeltaSweep out;
  std::vector<double> d, v;
  for (double eps : eps_grid) {
    RemainderQuery q = base;
    q.field.epsilon = eps;
    q.field.h = 0.0;
    q.delta = std::pow(eps, nu);
    ModelSweepPoint p;
    p.eps = eps;
    p.lambda = q.lambda;
    p.delta = q.delta;
    p.est = remainder_pairing(q);
    out.points.push_back(p);
    if (p.est.value > 0.0) {
      d.push_back(p.delta);
      v.push_back(p.est.value);
    }
  }
  if (d.size() >= 2) {
    LinearFit f = loglog_fit(d, v);
    out.slope = f.coef[1];
    out.slope_se = f.stderr_[1];
  }
  return out;
}

json GapSweep::to_json() const {
  json p = json::array();
  for (const auto& x : points)
    p.push_back({{"eps", x.eps}, {"lambda", x.lambda}, {"delta", x.delta}, {"estimate", x.est.to_json()}, {"bound", x.bound},
                 {"ratio", x.ratio}});
  return {{"points", p}, {"domination", domination.to_json()}, {"zeta", zeta}};
}

GapSweep gap_sweep(const RemainderQuery& base, const std::vector<double>& eps_grid, const std::vector<double>& lambda_grid,
                   double nu, double zeta, double tol) {
  GapSweep out;
  out.zeta = zeta;
  std::vector<double> E, Lm, R;
  for (double eps : eps_grid)
    for (double lambda : lambda_grid) {
      RemainderQuery q = base;
      q.field.epsilon = eps;
      q.field.h = 0.0;
      q.delta = std::pow(eps, nu);
      q.lambda = lambda;
      ModelSweepPoint p;
      p.eps = eps;
      p.lambda = lambda;
      p.delta = q.delta;
      p.est = mollification_gap(q);
      p.bound = std::pow(eps, zeta) * std::pow(lambda, -0.5 + zeta);
      p.ratio = p.est.value / p.bound;
      out.points.push_back(p);
      E.push_back(eps);
      Lm.push_back(lambda);
      R.push_back(p.ratio);
    }
  out.domination = domination_gate(E, Lm, R, tol);
  return out;
}

}  // namespace tchaos
