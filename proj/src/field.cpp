#include "tchaos/field.hpp"

#include <fftw3.h>

#include <cmath>
#include <cstring>
#include <complex>
#include <functional>
#include <mutex>

#include "tchaos/errors.hpp"
#include "tchaos/fft.hpp"
#include "tchaos/parallel.hpp"
#include "tchaos/rng.hpp"
#include "tchaos/simd.hpp"
#include "tchaos/stats.hpp"

namespace tchaos {

namespace {
std::mutex& planner_mutex() {
  static std::mutex mu;
  return mu;
}
}  // namespace

// r2c / c2r plans for one lattice shape. Executed with the new-array
// interface, which FFTW guarantees thread-safe.
class FftPlans {
 public:
  explicit FftPlans(const std::vector<std::size_t>& counts) {
    std::vector<int> n(counts.begin(), counts.end());
    real_size_ = 1;
    for (auto c : counts) real_size_ *= c;
    complex_size_ = real_size_ / counts.back() * (counts.back() / 2 + 1);
    std::vector<double> r(real_size_);
    std::vector<std::complex<double>> c(complex_size_);
    std::lock_guard<std::mutex> lk(planner_mutex());
    unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    fwd_ = fftw_plan_dft_r2c(static_cast<int>(n.size()), n.data(), r.data(), reinterpret_cast<fftw_complex*>(c.data()), flags);
    inv_ = fftw_plan_dft_c2r(static_cast<int>(n.size()), n.data(), reinterpret_cast<fftw_complex*>(c.data()), r.data(), flags);
  }
  ~FftPlans() {
    std::lock_guard<std::mutex> lk(planner_mutex());
    fftw_destroy_plan(fwd_);
    fftw_destroy_plan(inv_);
  }
  FftPlans(const FftPlans&) = delete;
  FftPlans& operator=(const FftPlans&) = delete;

  std::size_t real_size() const { return real_size_; }
  std::size_t complex_size() const { return complex_size_; }
  void forward(double* in, std::complex<double>* out) const { fftw_execute_dft_r2c(fwd_, in, reinterpret_cast<fftw_complex*>(out)); }
  // destroys `in`
  void inverse(std::complex<double>* in, double* out) const { fftw_execute_dft_c2r(inv_, reinterpret_cast<fftw_complex*>(in), out); }

 private:
  fftw_plan fwd_{}, inv_{};
  std::size_t real_size_ = 0, complex_size_ = 0;
};

std::shared_ptr<FftPlans> make_fft_plans(const std::vector<std::size_t>& counts) { return std::make_shared<FftPlans>(counts); }
void fft_forward(const FftPlans& p, double* in, std::complex<double>* out) { p.forward(in, out); }
void fft_inverse(const FftPlans& p, std::complex<double>* in, double* out) { p.inverse(in, out); }
std::size_t fft_complex_size(const FftPlans& p) { return p.complex_size(); }

CovProfile parse_profile(const std::string& s) {
  if (s == "power") return CovProfile::power;
  if (s == "smooth") return CovProfile::smooth;
  throw ConfigError("unknown covariance profile '" + s + "' (power | smooth)");
}

const char* profile_name(CovProfile p) { return p == CovProfile::power ? "power" : "smooth"; }

void CovarianceSpec::validate(double total) const {
  if (!(alpha > 0.0 && alpha < total)) throw ConfigError("covariance alpha must lie in (0, |s|)");
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw ConfigError("covariance epsilon must lie in (0,1)");
  if (!(lambda_const > 1.0)) throw ConfigError("sandwich constant must exceed 1");
}

double target_covariance(const CovarianceSpec& spec, double r) {
  if (spec.profile == CovProfile::power) return std::pow(r + spec.epsilon, -spec.alpha);
  double u = r / spec.epsilon;
  return std::pow(spec.epsilon, -spec.alpha) * std::pow(1.0 + u * u, -0.5 * spec.alpha);
}

namespace {

// Minimal-image coordinates of a flat index on a periodic lattice.
double min_image_metric(const Lattice& L, std::size_t flat, std::vector<double>& buf) {
  buf.resize(L.counts.size());
  for (std::size_t a = L.counts.size(); a-- > 0;) {
    long n = static_cast<long>(L.counts[a]);
    long k = static_cast<long>(flat % L.counts[a]);
    flat /= L.counts[a];
    if (k > n / 2) k -= n;
    buf[a] = static_cast<double>(k) * L.step[a];
  }
  return L.geometry.metric(buf);
}

// multiplicity of a half-spectrum entry in the full spectrum
double half_multiplicity(std::size_t flat_c, std::size_t nlast) {
  std::size_t kl = flat_c % (nlast / 2 + 1);
  if (kl == 0) return 1.0;
  if (nlast % 2 == 0 && kl == nlast / 2) return 1.0;
  return 2.0;
}

std::uint64_t spectrum_hash(const CovarianceSpec& s, const Lattice& L) {
  std::uint64_t h = 1469598103934665603ull;
  auto mix = [&](std::uint64_t v) {
    h ^= v;
    h *= 1099511628211ull;
  };
  auto mixd = [&](double d) {
    std::uint64_t v;
    std::memcpy(&v, &d, sizeof v);
    mix(v);
  };
  mixd(s.alpha);
  mixd(s.epsilon);
  mix(static_cast<std::uint64_t>(s.profile));
  mixd(L.h);
  for (auto c : L.counts) mix(c);
  for (auto v : L.geometry.s()) mixd(v);
  return h;
}

}  // namespace

Lattice field_lattice(const ScalingGeometry& g, double h, double min_period) {
  std::vector<std::size_t> counts;
  for (std::size_t a = 0; a < g.d(); ++a) {
    double st = std::pow(h, g.s()[a]);
    std::size_t n = 8;
    while (static_cast<double>(n) * st < min_period) n *= 2;
    counts.push_back(n);
  }
  return periodic_lattice(g, h, counts);
}

Spectrum build_spectrum(const CovarianceSpec& spec, const Lattice& lattice) {
  if (!lattice.periodic) throw PreconditionError("spectral synthesis needs a periodic lattice");
  spec.validate(lattice.geometry.total());
  Spectrum sp;
  sp.spec = spec;
  sp.lattice = std::make_shared<const Lattice>(lattice);
  sp.plans = make_fft_plans(lattice.counts);
  std::size_t N = lattice.size();
  std::vector<double> c(N);
  std::vector<double> buf;
  for (std::size_t f = 0; f < N; ++f) c[f] = target_covariance(spec, min_image_metric(lattice, f, buf));
  std::vector<std::complex<double>> ev(sp.plans->complex_size());
  sp.plans->forward(c.data(), ev.data());
  std::size_t nlast = lattice.counts.back();
  double pos = 0.0, neg = 0.0;
  sp.sqrt_eig.resize(ev.size());
  for (std::size_t k = 0; k < ev.size(); ++k) {
    double lam = ev[k].real();
    double mult = half_multiplicity(k, nlast);
    if (lam < 0.0) {
      neg += mult * (-lam);
      sp.sqrt_eig[k] = 0.0;
    } else {
      pos += mult * lam;
      sp.sqrt_eig[k] = std::sqrt(lam);
    }
  }
  sp.clipped_mass = neg / (pos + neg);
  if (sp.clipped_mass > spec.clip_threshold)
    throw ResourceError("circulant embedding clipped mass " + std::to_string(sp.clipped_mass) + " exceeds threshold; enlarge the extent");
  sp.psi_var = pos / static_cast<double>(N);
  sp.sigma2 = std::pow(spec.epsilon, spec.alpha) * sp.psi_var;
  sp.id = spectrum_hash(spec, lattice);
  return sp;
}

std::vector<double> spectrum_covariance(const Spectrum& sp) {
  std::size_t N = sp.lattice->size();
  std::vector<std::complex<double>> ev(sp.sqrt_eig.size());
  for (std::size_t k = 0; k < ev.size(); ++k) ev[k] = sp.sqrt_eig[k] * sp.sqrt_eig[k];
  std::vector<double> c(N);
  sp.plans->inverse(ev.data(), c.data());
  for (auto& v : c) v /= static_cast<double>(N);
  return c;
}

FieldSample sample_field(const Spectrum& sp, std::uint64_t seed, std::uint64_t index) {
  std::size_t N = sp.lattice->size();
  std::vector<double> w(N);
  Stream rs(seed, index, stream_tag::field);
  for (auto& v : w) v = rs.normal();
  std::vector<std::complex<double>> W(sp.sqrt_eig.size());
  sp.plans->forward(w.data(), W.data());
  for (std::size_t k = 0; k < W.size(); ++k) W[k] *= sp.sqrt_eig[k];
  FieldSample fs;
  fs.values.resize(N);
  sp.plans->inverse(W.data(), fs.values.data());
  double inv = 1.0 / static_cast<double>(N);
  for (auto& v : fs.values) v *= inv;
  fs.lattice = sp.lattice;
  fs.sigma2 = sp.sigma2;
  fs.x_scale = std::pow(sp.spec.epsilon, 0.5 * sp.spec.alpha);
  fs.spectrum_id = sp.id;
  return fs;
}

double sandwich_lambda(const std::vector<double>& c, const std::vector<double>& target) {
  double lam = 1.0;
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (!(c[i] > 0.0)) return INFINITY;
    lam = std::max(lam, std::max(c[i] / target[i], target[i] / c[i]));
  }
  return lam;
}

std::vector<std::size_t> lag_grid(std::size_t n) {
  std::vector<std::size_t> g{0};
  for (std::size_t k = 1; k <= n / 4; k *= 2) g.push_back(k);
  return g;
}

nlohmann::json SandwichReport::to_json() const {
  nlohmann::json j;
  j["lambda_hat"] = lambda_hat;
  j["lambda_ci"] = {lambda_lo, lambda_hi};
  j["clipped_mass"] = clipped_mass;
  j["sigma2"] = sigma2;
  j["per_lag"] = nlohmann::json::array();
  for (const auto& l : per_lag)
    j["per_lag"].push_back({{"lag", l.lag}, {"axis", l.axis}, {"c_hat", l.c_hat}, {"lo", l.lo}, {"hi", l.hi}, {"target", l.target}});
  j["violating_lags"] = violating_lags;
  return j;
}

SandwichReport verify_assumption1(const Spectrum& sp, long n_samples, std::uint64_t seed, unsigned workers, int n_boot) {
  if (n_samples < 1000) throw PreconditionError("verify_assumption1 needs at least 1000 samples");
  const Lattice& L = *sp.lattice;
  struct Lag {
    std::size_t axis, cells;
    double r;
  };
  std::vector<Lag> lags;
  for (std::size_t a = 0; a < L.counts.size(); ++a)
    for (std::size_t k : lag_grid(L.counts[a])) {
      if (a > 0 && k == 0) continue;
      lags.push_back({a, k, std::pow(static_cast<double>(k) * L.step[a], 1.0 / L.geometry.s()[a])});
    }
  std::size_t nl = lags.size();
  std::size_t N = L.size();
  // strides for shifting along each axis
  std::vector<std::size_t> stride(L.counts.size(), 1);
  for (std::size_t a = L.counts.size() - 1; a-- > 0;) stride[a] = stride[a + 1] * L.counts[a + 1];
  std::vector<double> prod(static_cast<std::size_t>(n_samples) * nl);
  parallel_for(static_cast<std::size_t>(n_samples), workers, [&](std::size_t s) {
    FieldSample fs = sample_field(sp, seed, s);
    std::vector<double> shifted(N);
    for (std::size_t l = 0; l < nl; ++l) {
      const Lag& lg = lags[l];
      std::size_t n = L.counts[lg.axis], st = stride[lg.axis];
      for (std::size_t f = 0; f < N; ++f) {
        std::size_t k = (f / st) % n;
        std::size_t k2 = (k + lg.cells) % n;
        shifted[f] = fs.values[f + (k2 - k) * st];
      }
      prod[s * nl + l] = simd::dot(fs.values.data(), shifted.data(), N) / static_cast<double>(N);
    }
  });
  auto lag_means = [&](const std::vector<std::size_t>* idx) {
    std::vector<double> m(nl);
    std::vector<double> col;
    for (std::size_t l = 0; l < nl; ++l) {
      col.clear();
      if (idx)
        for (auto i : *idx) col.push_back(prod[i * nl + l]);
      else
        for (long i = 0; i < n_samples; ++i) col.push_back(prod[static_cast<std::size_t>(i) * nl + l]);
      m[l] = mean(col);
    }
    return m;
  };
  std::vector<double> target(nl);
  for (std::size_t l = 0; l < nl; ++l) target[l] = target_covariance(sp.spec, lags[l].r);
  std::vector<double> chat = lag_means(nullptr);
  SandwichReport rep;
  rep.clipped_mass = sp.clipped_mass;
  rep.sigma2 = sp.sigma2;
  rep.lambda_hat = sandwich_lambda(chat, target);
  std::vector<std::vector<double>> boot(nl);
  std::vector<double> lam_boot;
  std::vector<std::size_t> idx;
  for (int b = 0; b < n_boot; ++b) {
    bootstrap_indices(seed ^ 0x5a5a5a5aull, static_cast<std::uint64_t>(b), static_cast<std::size_t>(n_samples), idx);
    auto m = lag_means(&idx);
    for (std::size_t l = 0; l < nl; ++l) boot[l].push_back(m[l]);
    lam_boot.push_back(sandwich_lambda(m, target));
  }
  std::sort(lam_boot.begin(), lam_boot.end());
  rep.lambda_lo = quantile_sorted(lam_boot, 0.025);
  rep.lambda_hi = quantile_sorted(lam_boot, 0.975);
  double budget = sp.spec.lambda_const;
  for (std::size_t l = 0; l < nl; ++l) {
    std::sort(boot[l].begin(), boot[l].end());
    LagEstimate e;
    e.lag = lags[l].r;
    e.cells = lags[l].cells;
    e.axis = lags[l].axis;
    e.c_hat = chat[l];
    e.lo = quantile_sorted(boot[l], 0.025);
    e.hi = quantile_sorted(boot[l], 0.975);
    e.target = target[l];
    if (e.hi < target[l] / budget || e.lo > target[l] * budget) rep.violating_lags.push_back(e.lag);
    rep.per_lag.push_back(e);
  }
  return rep;
}

}  // namespace tchaos
