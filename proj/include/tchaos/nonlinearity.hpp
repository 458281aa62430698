#pragma once
#include <memory>
#include <nlohmann/json.hpp>
#include <string>
#include <vector>

namespace tchaos {

enum class NonlinearityKind {
  power_even,  // |u|^{2+beta}
  power_odd,   // sign(u) |u|^{3+beta}
  polynomial,  // sum_n coeffs[n] u^n
  table,       // uniform samples, cubic B-spline
};

NonlinearityKind parse_nonlinearity_kind(const std::string& s);
const char* nonlinearity_kind_name(NonlinearityKind k);

struct MollifiedTable;

struct NonlinearitySpec {
  NonlinearityKind kind = NonlinearityKind::power_even;
  int k = 2;          // smoothness order
  double beta = 0.5;  // Hoelder index of F^{(k)}
  double M = 0.0;     // growth exponent, fitted at construction
  std::vector<double> coeffs;
  double table_x0 = 0.0, table_dx = 0.0;
  std::vector<double> table_y;
  double delta = 0.0;  // mollification scale, 0 = none
  std::shared_ptr<const MollifiedTable> base;  // spline of the table kind
  std::shared_ptr<const MollifiedTable> tab;   // tabulated F_delta^{(ell)}

  // F_delta^{(ell)}(u), ell <= k.
  double operator()(double u, int ell = 0) const;
  nlohmann::json to_json() const;
};

NonlinearitySpec make_nonlinearity(NonlinearityKind kind, double beta, std::vector<double> coeffs = {});
NonlinearitySpec make_table_nonlinearity(double x0, double dx, std::vector<double> y, double beta);

// Unmollified derivative F^{(ell)}(u), analytic where available.
double raw_derivative(const NonlinearitySpec& F, double u, int ell);

// Normalized standard bump on [-1,1] and its Fourier transform int rho(t) e^{-i w t} dt (real).
double mollifier(double t);
double mollifier_hat(double w);
// 1 - mollifier_hat(w), without the cancellation at small w.
double mollifier_hat_complement(double w);

// F_delta^{(ell)} = F^{(ell)} * rho_delta. Values with |u| <= tab_radius come
// from cubic splines at step delta/20 built once; the rest by adaptive quadrature.
NonlinearitySpec mollify(const NonlinearitySpec& F, double delta, double tab_radius = 0.0);

// Direct adaptive-quadrature value of (F^{(ell)} * rho_delta)(u), no table.
double mollified_direct(const NonlinearitySpec& F, double u, int ell, double delta);

// (1/order!) E F^{(order)}(Z), Z ~ N(0, sigma2).
double coupling_constant(const NonlinearitySpec& F, double sigma2, int order);

// Log-log slope of max_{ell<=k} |F^{(ell)}(u)| against 1+|u| on [R/64, R].
double growth_exponent(const NonlinearitySpec& F, double R = 64.0);

// sup over u in [-R,R] and h in [h_min,1) of |F^{(k)}(u+h)-F^{(k)}(u)| / (|h|^beta (1+|u|)^M).
double holder_quotient(const NonlinearitySpec& F, double R, double h_min);

// ---- windowed Fourier norms ----

struct WindowNormQuery {
  std::vector<int> ell{0};     // one derivative order per tensor factor
  std::vector<double> K{0.0};  // window centre
  int M_probe = 4;
  double delta = 0.0;
  bool difference = false;  // || Y - Y_delta || instead of || Y_delta ||
  int family = 1;           // probe family level (1 or 2); 2 doubles the family
};

// Lower bound of ||(x) F^{(ell_i)}^||_{M,R_K} as max over the probe family.
double window_norm(const NonlinearitySpec& F, const WindowNormQuery& q);

// <F^{(ell)}^, phi> for the family's probe `p` translated to K, plus the
// probe's B_M norm. Exposed for tests.
struct ProbePairing {
  double re = 0.0, im = 0.0;
  double probe_norm = 1.0;
};
std::size_t probe_family_size(int family);
ProbePairing probe_pairing(const NonlinearitySpec& F, int ell, double K, std::size_t probe, int M_probe, double delta,
                           bool difference, int family = 1);

struct DecayFit {
  int ell = 0;
  std::vector<double> K, norms;
  double slope = 0.0, slope_se = 0.0;  // d log norm / d log(1+|K|)
  double predicted = 0.0;              // -2 - beta + ell
  nlohmann::json to_json() const;
};

DecayFit window_decay(const NonlinearitySpec& F, int ell, const std::vector<double>& Ks, int M_probe = 4, int family = 1);

struct DifferenceSweep {
  int ell = 0;
  double omega = 0.0;
  std::vector<double> delta, K, norms, ratios;  // ratio to delta^w (1+K)^{-2-beta+ell+w}
  double delta_slope = 0.0, K_slope = 0.0;
  double max_ratio = 0.0;
  nlohmann::json to_json() const;
};

DifferenceSweep difference_sweep(const NonlinearitySpec& F, int ell, const std::vector<double>& deltas, const std::vector<double>& Ks,
                                 double omega, int M_probe = 4, int family = 1);

}  // namespace tchaos
