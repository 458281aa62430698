#pragma once
#include <cstdint>
#include <memory>
#include <nlohmann/json.hpp>
#include <string>
#include <vector>

#include "tchaos/geometry.hpp"

namespace tchaos {

enum class CovProfile {
  power,   // (|x|_s + eps)^{-alpha}
  smooth,  // eps^{-alpha} (1 + (|x|_s/eps)^2)^{-alpha/2}, same sandwich class
};

CovProfile parse_profile(const std::string& s);
const char* profile_name(CovProfile p);

struct CovarianceSpec {
  double alpha = 0.6;
  double epsilon = 0.1;
  double lambda_const = 2.0;  // sandwich budget
  CovProfile profile = CovProfile::power;
  double clip_threshold = 0.01;

  void validate(double total_scaling) const;
};

// Target covariance of Psi_eps at lag r = |x|_s.
double target_covariance(const CovarianceSpec& spec, double r);

class FftPlans;

// Circulant-embedding spectrum on a periodic lattice.
struct Spectrum {
  CovarianceSpec spec;
  std::shared_ptr<const Lattice> lattice;
  std::vector<double> sqrt_eig;  // half-spectrum (r2c layout)
  double clipped_mass = 0.0;     // sum |negative eigs| / sum |eigs|
  double sigma2 = 0.0;           // exact Var(eps^{alpha/2} Psi) after clipping
  double psi_var = 0.0;          // exact Var(Psi) after clipping
  std::uint64_t id = 0;
  std::shared_ptr<FftPlans> plans;
};

Spectrum build_spectrum(const CovarianceSpec& spec, const Lattice& lattice);

// Realized covariance of the (clipped) embedding at every lattice offset.
std::vector<double> spectrum_covariance(const Spectrum& sp);

struct FieldSample {
  std::shared_ptr<const Lattice> lattice;
  std::vector<double> values;  // Psi_eps
  double sigma2 = 0.0;         // Var X, X = x_scale * Psi
  double x_scale = 1.0;        // eps^{alpha/2}
  std::uint64_t spectrum_id = 0;
};

// Deterministic in (seed, index); reentrant.
FieldSample sample_field(const Spectrum& sp, std::uint64_t seed, std::uint64_t index);

struct LagEstimate {
  double lag = 0.0;  // |x|_s
  std::size_t cells = 0;
  std::size_t axis = 0;
  double c_hat = 0.0, lo = 0.0, hi = 0.0;
  double target = 0.0;
};

struct SandwichReport {
  double lambda_hat = 0.0;
  double lambda_lo = 0.0, lambda_hi = 0.0;  // bootstrap interval of lambda_hat
  std::vector<LagEstimate> per_lag;
  double clipped_mass = 0.0;
  double sigma2 = 0.0;
  std::vector<double> violating_lags;  // lags whose CI leaves the budget band
  nlohmann::json to_json() const;
};

// Smallest Lambda with target/Lambda <= c <= Lambda*target on every entry.
double sandwich_lambda(const std::vector<double>& c, const std::vector<double>& target);

// Lag cells 0,1,2,4,... up to n/4.
std::vector<std::size_t> lag_grid(std::size_t n);

SandwichReport verify_assumption1(const Spectrum& sp, long n_samples, std::uint64_t seed, unsigned workers = 1,
                                  int n_boot = 500);

// Periodic lattice with period >= min_period on every axis, counts powers of two.
Lattice field_lattice(const ScalingGeometry& g, double h, double min_period);

}  // namespace tchaos
