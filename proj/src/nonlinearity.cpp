#include "tchaos/nonlinearity.hpp"

#include <algorithm>
#include <boost/math/interpolators/cardinal_cubic_b_spline.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <complex>
#include <limits>
#include <map>
#include <mutex>
#include <numbers>

#include "tchaos/errors.hpp"
#include "tchaos/fft.hpp"
#include "tchaos/geometry.hpp"
#include "tchaos/quadrature.hpp"
#include "tchaos/stats.hpp"

namespace tchaos {

using Spline = boost::math::interpolators::cardinal_cubic_b_spline<double>;

struct MollifiedTable {
  double lo = 0.0, hi = 0.0;
  std::vector<Spline> by_ell;  // by_ell[l] tabulates the l-th derivative
};

NonlinearityKind parse_nonlinearity_kind(const std::string& s) {
  if (s == "power_even") return NonlinearityKind::power_even;
  if (s == "power_odd") return NonlinearityKind::power_odd;
  if (s == "polynomial") return NonlinearityKind::polynomial;
  if (s == "table") return NonlinearityKind::table;
  throw ConfigError("unknown nonlinearity kind: " + s);
}

const char* nonlinearity_kind_name(NonlinearityKind k) {
  switch (k) {
    case NonlinearityKind::power_even: return "power_even";
    case NonlinearityKind::power_odd: return "power_odd";
    case NonlinearityKind::polynomial: return "polynomial";
    case NonlinearityKind::table: return "table";
  }
  return "?";
}

namespace {

// d^ell/du^ell of sign(u)^odd |u|^p
double power_derivative(double u, double p, bool odd, int ell) {
  double c = 1.0;
  for (int i = 0; i < ell; ++i) c *= p - i;
  if (c == 0.0) return 0.0;
  double e = p - ell;
  bool sgn_odd = (odd ? 1 : 0) ^ (ell & 1);
  if (u == 0.0) {
    if (e > 0.0) return 0.0;
    if (e == 0.0) return sgn_odd ? 0.0 : c;
    return std::numeric_limits<double>::infinity();
  }
  double v = c * std::pow(std::fabs(u), e);
  return (sgn_odd && u < 0.0) ? -v : v;
}

double poly_derivative(const std::vector<double>& a, double u, int ell) {
  double v = 0.0;
  for (std::size_t n = a.size(); n-- > static_cast<std::size_t>(ell);) {
    double c = a[n];
    for (int i = 0; i < ell; ++i) c *= static_cast<double>(n - i);
    v = v * u + c;
  }
  return v;
}

}  // namespace

double raw_derivative(const NonlinearitySpec& F, double u, int ell) {
  if (ell < 0) throw PreconditionError("negative derivative order");
  switch (F.kind) {
    case NonlinearityKind::power_even: return power_derivative(u, 2.0 + F.beta, false, ell);
    case NonlinearityKind::power_odd: return power_derivative(u, 3.0 + F.beta, true, ell);
    case NonlinearityKind::polynomial: return poly_derivative(F.coeffs, u, ell);
    case NonlinearityKind::table: {
      if (ell > 2) throw PreconditionError("table nonlinearities support ell <= 2");
      const Spline& s = F.base->by_ell[0];
      if (ell == 0) return s(u);
      if (ell == 1) return s.prime(u);
      return s.double_prime(u);
    }
  }
  return 0.0;
}

double mollifier(double t) {
  static const double Z = [] {
    return integrate_graded([](double s) { return bump_profile_sq(s * s); }, -1.0, 1.0, {}, 8, 16);
  }();
  if (std::fabs(t) >= 1.0) return 0.0;
  return bump_profile_sq(t * t) / Z;
}

double mollifier_hat(double w) {
  const Rule<double>& gl = gauss_legendre_cached(200);
  double acc = 0.0;
  for (std::size_t i = 0; i < gl.nodes.size(); ++i) acc += gl.weights[i] * mollifier(gl.nodes[i]) * std::cos(w * gl.nodes[i]);
  return acc;
}

double mollifier_hat_complement(double w) {
  const Rule<double>& gl = gauss_legendre_cached(200);
  double acc = 0.0;
  for (std::size_t i = 0; i < gl.nodes.size(); ++i) {
    double sn = std::sin(0.5 * w * gl.nodes[i]);
    acc += gl.weights[i] * mollifier(gl.nodes[i]) * 2.0 * sn * sn;
  }
  return acc;
}

double mollified_direct(const NonlinearitySpec& F, double u, int ell, double delta) {
  if (delta <= 0.0) return raw_derivative(F, u, ell);
  auto f = [&](double t) { return raw_derivative(F, u - delta * t, ell) * mollifier(t); };
  using GK = boost::math::quadrature::gauss_kronrod<double, 31>;
  double t0 = u / delta;
  if (F.kind != NonlinearityKind::polynomial && std::fabs(t0) < 1.0)
    return GK::integrate(f, -1.0, t0, 15, 1e-13) + GK::integrate(f, t0, 1.0, 15, 1e-13);
  return GK::integrate(f, -1.0, 1.0, 15, 1e-13);
}

double NonlinearitySpec::operator()(double u, int ell) const {
  if (ell > k) throw PreconditionError("derivative order above the smoothness order");
  if (delta <= 0.0) return raw_derivative(*this, u, ell);
  if (tab && u >= tab->lo && u <= tab->hi) return tab->by_ell[static_cast<std::size_t>(ell)](u);
  return mollified_direct(*this, u, ell, delta);
}

nlohmann::json NonlinearitySpec::to_json() const {
  return {{"kind", nonlinearity_kind_name(kind)}, {"k", k}, {"beta", beta}, {"M", M}, {"coeffs", coeffs}, {"delta", delta}};
}

NonlinearitySpec make_nonlinearity(NonlinearityKind kind, double beta, std::vector<double> coeffs) {
  if (!(beta > 0.0 && beta < 1.0)) throw PreconditionError("beta must lie in (0,1)");
  NonlinearitySpec F;
  F.kind = kind;
  F.beta = beta;
  switch (kind) {
    case NonlinearityKind::power_even: F.k = 2; break;
    case NonlinearityKind::power_odd: F.k = 3; break;
    case NonlinearityKind::polynomial:
      if (coeffs.empty()) throw PreconditionError("polynomial nonlinearity needs coefficients");
      F.coeffs = std::move(coeffs);
      F.k = std::max<int>(3, static_cast<int>(F.coeffs.size()));
      break;
    case NonlinearityKind::table: throw PreconditionError("use make_table_nonlinearity");
  }
  F.M = growth_exponent(F);
  return F;
}

NonlinearitySpec make_table_nonlinearity(double x0, double dx, std::vector<double> y, double beta) {
  if (!(beta > 0.0 && beta < 1.0)) throw PreconditionError("beta must lie in (0,1)");
  if (y.size() < 8 || !(dx > 0.0)) throw PreconditionError("table needs >= 8 samples and positive spacing");
  NonlinearitySpec F;
  F.kind = NonlinearityKind::table;
  F.beta = beta;
  F.k = 2;
  F.table_x0 = x0;
  F.table_dx = dx;
  F.table_y = std::move(y);
  auto t = std::make_shared<MollifiedTable>();
  t->lo = x0;
  t->hi = x0 + dx * static_cast<double>(F.table_y.size() - 1);
  t->by_ell.emplace_back(F.table_y.begin(), F.table_y.end(), x0, dx);
  F.base = t;
  F.M = growth_exponent(F, std::min(64.0, std::min(std::fabs(t->lo), std::fabs(t->hi))));
  return F;
}

NonlinearitySpec mollify(const NonlinearitySpec& F, double delta, double tab_radius) {
  if (delta == 0.0) return F;
  if (!(delta > 0.0 && delta < 1.0)) throw PreconditionError("delta must lie in (0,1)");
  if (F.delta > 0.0) throw PreconditionError("already mollified");
  NonlinearitySpec G = F;
  G.delta = delta;
  G.tab.reset();
  if (tab_radius > 0.0) {
    auto t = std::make_shared<MollifiedTable>();
    double step = delta / 20.0;
    std::size_t n = static_cast<std::size_t>(std::ceil(2.0 * tab_radius / step)) + 1;
    t->lo = -tab_radius;
    t->hi = -tab_radius + step * static_cast<double>(n - 1);
    int kmax = F.kind == NonlinearityKind::table ? 2 : F.k;
    for (int l = 0; l <= kmax; ++l) {
      std::vector<double> v(n);
      for (std::size_t i = 0; i < n; ++i) v[i] = mollified_direct(F, t->lo + step * static_cast<double>(i), l, delta);
      t->by_ell.emplace_back(v.begin(), v.end(), t->lo, step);
    }
    G.tab = t;
  }
  return G;
}

double coupling_constant(const NonlinearitySpec& F, double sigma2, int order) {
  if (!(sigma2 > 0.0)) throw PreconditionError("sigma2 must be positive");
  if (order < 0 || order > F.k) throw PreconditionError("order above the smoothness order");
  double sd = std::sqrt(sigma2);
  double fact = std::tgamma(order + 1.0);
  if (F.kind == NonlinearityKind::polynomial && F.delta == 0.0) {
    const Rule<double>& gh = gauss_hermite_cached(64);
    double acc = 0.0;
    for (std::size_t i = 0; i < gh.nodes.size(); ++i) acc += gh.weights[i] * F(sd * gh.nodes[i], order);
    return acc / fact;
  }
  // Power kinds are not smooth at 0: integrate each half line separately.
  using GK = boost::math::quadrature::gauss_kronrod<double, 61>;
  auto dens = [](double z) { return std::exp(-0.5 * z * z) / std::sqrt(2.0 * std::numbers::pi); };
  auto f = [&](double z) { return (F(sd * z, order) + F(-sd * z, order)) * dens(z); };
  double acc = GK::integrate(f, 0.0, 12.0, 20, 1e-14) + GK::integrate(f, 12.0, 40.0, 20, 1e-14);
  return acc / fact;
}

double growth_exponent(const NonlinearitySpec& F, double R) {
  std::vector<double> xs, ys;
  for (int i = 0; i < 32; ++i) {
    double u = R / 64.0 * std::pow(64.0, i / 31.0);
    double m = 0.0;
    int kmax = F.kind == NonlinearityKind::table ? 2 : F.k;
    for (int l = 0; l <= kmax; ++l) m = std::max({m, std::fabs(F(u, l)), std::fabs(F(-u, l))});
    if (m > 0.0 && std::isfinite(m)) {
      xs.push_back(1.0 + u);
      ys.push_back(m);
    }
  }
  if (xs.size() < 2) return 0.0;
  return std::max(0.0, loglog_fit(xs, ys).coef[1]);
}

double holder_quotient(const NonlinearitySpec& F, double R, double h_min) {
  int k = F.kind == NonlinearityKind::table ? 2 : F.k;
  double q = 0.0;
  const int nu = 801;
  for (int i = 0; i < nu; ++i) {
    double u = -R + 2.0 * R * i / (nu - 1);
    double fu = F(u, k);
    for (double h = h_min; h < 1.0; h *= 2.0)
      for (double s : {h, -h}) {
        double d = std::fabs(F(u + s, k) - fu) / std::pow(h, F.beta) / std::pow(1.0 + std::fabs(u), F.M);
        if (std::isfinite(d)) q = std::max(q, d);
      }
  }
  // the kink at 0 is the worst case for the power kinds
  double d0 = std::fabs(F(h_min, k) - F(0.0, k)) / std::pow(h_min, F.beta);
  if (std::isfinite(d0)) q = std::max(q, d0);
  return q;
}

// ---- windowed Fourier norms ----

namespace {

constexpr std::size_t kGridN = std::size_t(1) << 19;
constexpr double kGridHalfWidth = 2000.0;

struct FourierGrid {
  double dx = 2.0 * kGridHalfWidth / static_cast<double>(kGridN);
  double du = 2.0 * std::numbers::pi / (static_cast<double>(kGridN) * (2.0 * kGridHalfWidth / static_cast<double>(kGridN)));
  std::shared_ptr<FftPlans> plans = make_fft_plans({kGridN});
  double x(std::size_t j) const { return (static_cast<double>(j) - static_cast<double>(kGridN / 2)) * dx; }
  double u(std::size_t k) const { return (static_cast<double>(k) - static_cast<double>(kGridN / 2)) * du; }
};

const FourierGrid& grid() {
  static const FourierGrid g;
  return g;
}

double bump(double u) { return std::fabs(u) < 1.0 ? bump_profile_sq(u * u) : 0.0; }

// Probe shapes on the window [-1,1] (window-local coordinate u = theta - K).
double probe_shape(std::size_t p, double u) {
  constexpr double pi = std::numbers::pi;
  switch (p) {
    case 0: return bump(u);
    case 1: return bump(u) * u;
    case 2: return bump(u) * std::cos(pi * u);
    case 3: return bump(u) * u * u;
    case 4: return bump(u) * std::sin(pi * u);
    case 5: return bump(2.0 * (u - 0.5));
    case 6: return bump(2.0 * (u + 0.5));
  }
  return 0.0;
}

// sup_{r<=M} sup_u |d^r probe|, central differences of step 1e-2.
double probe_bm_norm(std::size_t p, int M) {
  static std::mutex mu;
  static std::map<std::pair<std::size_t, int>, double> cache;
  std::lock_guard<std::mutex> lk(mu);
  auto key = std::make_pair(p, M);
  if (auto it = cache.find(key); it != cache.end()) return it->second;
  const double h = 1e-2;
  double best = 0.0;
  for (int r = 0; r <= M; ++r) {
    std::vector<double> binom(r + 1, 1.0);
    for (int i = 1; i <= r; ++i) binom[i] = binom[i - 1] * (r - i + 1) / i;
    for (int i = 0; i <= 2000; ++i) {
      double u = -1.0 + i * 1e-3;
      double acc = 0.0;
      for (int t = 0; t <= r; ++t) acc += ((t & 1) ? -1.0 : 1.0) * binom[t] * probe_shape(p, u + (0.5 * r - t) * h);
      best = std::max(best, std::fabs(acc) / std::pow(h, r));
    }
  }
  cache[key] = best;
  return best;
}

// ghat(x_j) = int psi(u) e^{-i u x_j} du via one real FFT; values below the
// round-off floor are zeroed so the polynomially growing F does not amplify them.
std::vector<std::complex<double>> transform(const std::vector<double>& psi) {
  const FourierGrid& G = grid();
  const std::size_t N = kGridN;
  std::vector<double> in(N);
  for (std::size_t k = 0; k < N; ++k) in[k] = (k & 1) ? -psi[k] : psi[k];
  std::vector<std::complex<double>> out(fft_complex_size(*G.plans));
  fft_forward(*G.plans, in.data(), out.data());
  std::vector<std::complex<double>> g(N);
  double mx = 0.0;
  for (std::size_t j = 0; j < N; ++j) {
    std::complex<double> X = j <= N / 2 ? out[j] : std::conj(out[N - j]);
    g[j] = G.du * ((j & 1) ? -X : X);
    mx = std::max(mx, std::abs(g[j]));
  }
  double thr = 1e-15 * mx;
  std::size_t lo = 0, hi = N - 1;
  while (lo < N && std::abs(g[lo]) <= thr) ++lo;
  while (hi > lo && std::abs(g[hi]) <= thr) --hi;
  if (lo == 0 || hi == N - 1) throw ResolutionError("probe transform not decayed at the grid edge; widen the x-range");
  for (std::size_t j = 0; j < lo; ++j) g[j] = 0.0;
  for (std::size_t j = hi + 1; j < N; ++j) g[j] = 0.0;
  return g;
}

// psi(u) = probe(u) * m(K + u), sampled on the u-grid.
template <class Mult>
std::vector<double> probe_samples(std::size_t p, double K, const Mult& mult) {
  const FourierGrid& G = grid();
  std::vector<double> psi(kGridN, 0.0);
  std::size_t c = kGridN / 2;
  std::size_t w = static_cast<std::size_t>(std::ceil(1.0 / G.du)) + 1;
  for (std::size_t k = c - w; k <= c + w; ++k) {
    double u = G.u(k);
    double v = probe_shape(p, u);
    if (v != 0.0) psi[k] = v * mult(K + u);
  }
  return psi;
}

std::vector<double> derivative_grid(const NonlinearitySpec& F, int ell) {
  const FourierGrid& G = grid();
  std::vector<double> f(kGridN);
  for (std::size_t j = 0; j < kGridN; ++j) {
    double v = raw_derivative(F, G.x(j), ell);
    f[j] = std::isfinite(v) ? v : 0.0;
  }
  return f;
}

std::complex<double> pair_at(const std::vector<double>& f, const std::vector<std::complex<double>>& g, double K) {
  const FourierGrid& G = grid();
  std::complex<double> acc = 0.0;
  for (std::size_t j = 0; j < kGridN; ++j) {
    if (g[j] == 0.0) continue;
    acc += f[j] * std::polar(1.0, -K * G.x(j)) * g[j];
  }
  return acc * G.dx;
}

std::complex<double> pairing_complex(const std::vector<double>& fgrid, double K, std::size_t p, double delta, bool difference) {
  std::vector<double> psi;
  if (delta <= 0.0) {
    if (difference) return 0.0;
    psi = probe_samples(p, K, [](double) { return 1.0; });
  } else if (difference) {
    psi = probe_samples(p, K, [&](double th) { return mollifier_hat_complement(delta * th); });
  } else {
    psi = probe_samples(p, K, [&](double th) { return mollifier_hat(delta * th); });
  }
  return pair_at(fgrid, transform(psi), K);
}

}  // namespace

std::size_t probe_family_size(int family) { return family >= 2 ? 7 : 3; }

ProbePairing probe_pairing(const NonlinearitySpec& F, int ell, double K, std::size_t probe, int M_probe, double delta,
                           bool difference, int family) {
  if (probe >= probe_family_size(family)) throw PreconditionError("probe index outside the family");
  if (F.delta > 0.0) throw PreconditionError("pass the unmollified F; delta is part of the query");
  auto fgrid = derivative_grid(F, ell);
  auto c = pairing_complex(fgrid, K, probe, delta, difference);
  return {c.real(), c.imag(), probe_bm_norm(probe, M_probe)};
}

double window_norm(const NonlinearitySpec& F, const WindowNormQuery& q) {
  if (q.ell.size() != q.K.size() || q.ell.empty()) throw DimensionError("ell and K must have the same positive length");
  if (q.ell.size() > 3) throw PreconditionError("tensor order above 3");
  if (F.delta > 0.0) throw PreconditionError("pass the unmollified F; delta is part of the query");
  std::size_t P = probe_family_size(q.family);
  std::size_t d = q.ell.size();
  // per-axis pairings of every probe: full and mollified
  std::vector<std::vector<std::complex<double>>> full(d), moll(d);
  for (std::size_t a = 0; a < d; ++a) {
    auto fgrid = derivative_grid(F, q.ell[a]);
    for (std::size_t p = 0; p < P; ++p) {
      full[a].push_back(pairing_complex(fgrid, q.K[a], p, 0.0, false));
      moll[a].push_back(q.delta > 0.0 ? pairing_complex(fgrid, q.K[a], p, q.delta, false) : full[a].back());
    }
  }
  double best = 0.0;
  std::vector<std::size_t> idx(d, 0);
  while (true) {
    std::complex<double> pf = 1.0, pm = 1.0;
    double nrm = 1.0;
    for (std::size_t a = 0; a < d; ++a) {
      pf *= full[a][idx[a]];
      pm *= moll[a][idx[a]];
      nrm *= probe_bm_norm(idx[a], q.M_probe);
    }
    double v = q.difference ? std::abs(pf - pm) : std::abs(pm);
    best = std::max(best, v / nrm);
    std::size_t a = 0;
    while (a < d && ++idx[a] == P) idx[a++] = 0;
    if (a == d) break;
  }
  return best;
}

nlohmann::json DecayFit::to_json() const {
  return {{"ell", ell}, {"K", K}, {"norms", norms}, {"slope", slope}, {"slope_se", slope_se}, {"predicted", predicted}};
}

DecayFit window_decay(const NonlinearitySpec& F, int ell, const std::vector<double>& Ks, int M_probe, int family) {
  DecayFit d;
  d.ell = ell;
  d.predicted = -2.0 - F.beta + ell;
  auto fgrid = derivative_grid(F, ell);
  std::size_t P = probe_family_size(family);
  std::vector<std::vector<std::complex<double>>> g;
  for (std::size_t p = 0; p < P; ++p) g.push_back(transform(probe_samples(p, 0.0, [](double) { return 1.0; })));
  std::vector<double> xs;
  for (double K : Ks) {
    double best = 0.0;
    for (std::size_t p = 0; p < P; ++p) best = std::max(best, std::abs(pair_at(fgrid, g[p], K)) / probe_bm_norm(p, M_probe));
    d.K.push_back(K);
    d.norms.push_back(best);
    xs.push_back(1.0 + std::fabs(K));
  }
  LinearFit f = loglog_fit(xs, d.norms);
  d.slope = f.coef[1];
  d.slope_se = f.stderr_[1];
  return d;
}

nlohmann::json DifferenceSweep::to_json() const {
  return {{"ell", ell},       {"omega", omega},     {"delta", delta},           {"K", K},
          {"norms", norms},   {"ratios", ratios},   {"delta_slope", delta_slope}, {"K_slope", K_slope},
          {"max_ratio", max_ratio}};
}

DifferenceSweep difference_sweep(const NonlinearitySpec& F, int ell, const std::vector<double>& deltas, const std::vector<double>& Ks,
                                 double omega, int M_probe, int family) {
  DifferenceSweep s;
  s.ell = ell;
  s.omega = omega;
  auto fgrid = derivative_grid(F, ell);
  std::size_t P = probe_family_size(family);
  std::vector<std::vector<double>> X;
  std::vector<double> y;
  for (double dl : deltas)
    for (double K : Ks) {
      double best = 0.0;
      for (std::size_t p = 0; p < P; ++p)
        best = std::max(best, std::abs(pairing_complex(fgrid, K, p, dl, true)) / probe_bm_norm(p, M_probe));
      double bound = std::pow(dl, omega) * std::pow(1.0 + std::fabs(K), -2.0 - F.beta + ell + omega);
      s.delta.push_back(dl);
      s.K.push_back(K);
      s.norms.push_back(best);
      s.ratios.push_back(best / bound);
      s.max_ratio = std::max(s.max_ratio, best / bound);
      if (best > 0.0) {
        X.push_back({std::log(dl), std::log(1.0 + std::fabs(K))});
        y.push_back(std::log(best));
      }
    }
  if (y.size() >= 3) {
    LinearFit f = ols(X, y);
    s.delta_slope = f.coef[1];
    s.K_slope = f.coef[2];
  }
  return s;
}

}  // namespace tchaos
