#pragma once
#include <complex>
#include <cstdint>
#include <functional>
#include <memory>
#include <nlohmann/json.hpp>
#include <string>
#include <vector>

#include "tchaos/experiments.hpp"
#include "tchaos/field.hpp"
#include "tchaos/geometry.hpp"
#include "tchaos/nonlinearity.hpp"

namespace tchaos {

enum class ModelFamily { kpz, phi43 };

ModelFamily parse_family(const std::string& s);
const char* family_name(ModelFamily f);

// KPZ: (t, x) with s = (2, 1). Phi^4_3: (t, x1, x2, x3) with s = (2, 1, 1, 1).
ScalingGeometry model_geometry(ModelFamily f);

struct ModelFieldSpec {
  ModelFamily family = ModelFamily::kpz;
  double epsilon = 0.1;
  double h = 0.0;          // 0 means epsilon / 2
  double cutoff = 0.5;     // heat kernel truncation radius
  double min_period = 0.0; // per-axis metric period floor on top of the stencil support
};

// Truncated heat kernel (or its x-derivative) at a space-time point, with
// the time coordinate taken at the midpoint of its lattice cell.
double heat_stencil_value(const Point& z, double dt, double cutoff, bool x_derivative);

// Psi = (P * rho_eps) * xi (Phi^4_3) or (d_x P * rho_eps) * xi (KPZ) on a
// periodic lattice, by FFT convolution of lattice white noise.
class ModelField {
 public:
  explicit ModelField(const ModelFieldSpec& spec);

  const ModelFieldSpec& spec() const { return spec_; }
  const std::shared_ptr<const Lattice>& lattice() const { return lattice_; }
  double h() const { return lattice_->h; }
  double psi_var() const { return psi_var_; }    // exact Var Psi on the lattice
  double sigma2() const { return spec_.epsilon * psi_var_; }  // Var sqrt(eps) Psi

  FieldSample sample(std::uint64_t seed, std::uint64_t index) const;

  // Circular convolution cell * sum_w k(z - w) f(w); `kernel_hat` from transform().
  std::vector<double> convolve(const std::vector<double>& f, const std::vector<std::complex<double>>& kernel_hat) const;
  std::vector<std::complex<double>> transform(std::vector<double> f) const;

  // Stencil laid out in FFT order from a function of the wrapped offset.
  std::vector<double> stencil(const std::function<double(const Point&)>& fn) const;

  std::size_t origin_flat() const;

 private:
  ModelFieldSpec spec_;
  std::shared_ptr<const Lattice> lattice_;
  std::shared_ptr<FftPlans> plans_;
  std::vector<std::complex<double>> transfer_;
  double psi_var_ = 0.0;
};

enum class ModelSymbol { s0, s1, s2, s3 };  // <0'>, <1'>, <2'>, <3'>

ModelSymbol parse_symbol(const std::string& s);
const char* symbol_name(ModelSymbol s);

enum class Renorm { analytic, empirical };

struct ModelObjectSpec {
  ModelFamily family = ModelFamily::kpz;
  ModelSymbol symbol = ModelSymbol::s2;
  NonlinearitySpec nonlinearity;
  double a = 1.0;
  double epsilon = 0.1;
  double sigma2 = 1.0;  // Var of the argument sqrt(eps) Psi
  Renorm renorm = Renorm::analytic;
  double C = 0.0;       // C_<2'> (or the <0'> constant in empirical mode)
  nlohmann::json to_json() const;
};

// a = E F''(X)/2 (KPZ) or E G'''(X)/6 (Phi^4_3); C from the Gaussian mean.
ModelObjectSpec make_object(ModelFamily family, ModelSymbol symbol, const NonlinearitySpec& F, const ModelField& field,
                            Renorm renorm = Renorm::analytic);

// Replaces the renormalization constant by the Monte Carlo mean over sites
// and samples. Returns the standard error of that mean.
double set_empirical_constant(ModelObjectSpec& spec, const ModelField& field, long n_samples, std::uint64_t seed,
                              unsigned workers = 1);

// (Pi^eps tau)(z) at lattice site `site` of the sample.
double eval_object(const ModelObjectSpec& spec, const FieldSample& sample, std::size_t site);

// Closed-form Wick polynomial of a polynomial-nonlinearity object at one
// site, from the chaos expansion of the relevant derivative.
double polynomial_object_oracle(const ModelObjectSpec& spec, const FieldSample& sample, std::size_t site);

// ---- negative Hoelder norm ----

struct HolderNormEstimate {
  double alpha = 0.0;
  double value = 0.0;
  double lambda_at = 0.0;
  std::size_t center_at = 0;
  int levels = 0;
  std::size_t stride = 1;
  nlohmann::json to_json() const;
};

// max over lambda = lambda_max 2^{-k} (k < levels, lambda >= 2h) and centres on
// every `stride`-th site per axis of lambda^{-alpha} |<f, phi^lambda_z>|.
HolderNormEstimate holder_norm(const ModelField& field, const std::vector<double>& f, double alpha, int lambda_levels,
                               std::size_t stride, double lambda_max = 1.0);

// ---- remainder pairings ----

struct RemainderQuery {
  ModelFieldSpec field;
  NonlinearitySpec nonlinearity;
  double delta = 0.0;
  double lambda = 0.5;
  int n = 1;
  long n_samples = 1000;
  std::uint64_t seed = 1;
  unsigned workers = 1;
};

// || <tau_eps - tau_eps^(delta), phi^lambda> ||_{2n} for <2'1'> (KPZ) or <3'2'> (Phi^4_3).
MomentEstimate remainder_pairing(const RemainderQuery& q);

// || <<1'>_eps - <1'>_eps^(delta), phi^lambda> ||_{2n}, KPZ.
MomentEstimate mollification_gap(const RemainderQuery& q);

struct ModelSweepPoint {
  double eps = 0.0, lambda = 0.0, delta = 0.0;
  MomentEstimate est;
  double bound = 0.0, ratio = 0.0;
};

struct DeltaSweep {
  std::vector<ModelSweepPoint> points;
  double slope = 0.0, slope_se = 0.0;  // d log estimate / d log delta
  nlohmann::json to_json() const;
};

// remainder_pairing along delta = eps^nu for the listed eps.
DeltaSweep remainder_sweep(const RemainderQuery& base, const std::vector<double>& eps_grid, double nu);

struct GapSweep {
  std::vector<ModelSweepPoint> points;
  DominationFit domination;
  double zeta = 0.0;
  nlohmann::json to_json() const;
};

// mollification_gap over an (eps, lambda) grid, delta = eps^nu, bound eps^zeta lambda^{-1/2+zeta}.
GapSweep gap_sweep(const RemainderQuery& base, const std::vector<double>& eps_grid, const std::vector<double>& lambda_grid,
                   double nu, double zeta, double tol = 0.1);

}  // namespace tchaos
