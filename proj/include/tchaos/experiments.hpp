#pragma once
#include <cstdint>
#include <nlohmann/json.hpp>
#include <string>
#include <utility>
#include <vector>

#include "tchaos/chaos.hpp"
#include "tchaos/field.hpp"
#include "tchaos/geometry.hpp"
#include "tchaos/kernel.hpp"

namespace tchaos {

struct MomentEstimate {
  int n = 1;
  double value = 0.0;
  double ci_lo = 0.0, ci_hi = 0.0;
  long n_samples = 0;
  nlohmann::json to_json() const;
};

inline constexpr long kMinMomentSamples = 200;
inline constexpr int kBootstrapResamples = 500;

// (E|v|^{2n})^{1/(2n)}, percentile-bootstrap interval.
MomentEstimate moment_norm(const std::vector<double>& values, int n, std::uint64_t seed = 1, int n_boot = kBootstrapResamples);

// Derives independent sub-seeds from a master seed.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t tag);

// Everything needed to evaluate A_{eps,lambda}F(Theta) on synthesized fields.
struct OperatorSetup {
  ScalingGeometry geometry{std::vector<double>{1.0}};
  CovarianceSpec cov;
  double gamma = 0.4;
  int re = -1;  // -1: derived from (gamma, alpha, m2)
  double cutoff = 1.0;
  Trig trig1 = Trig::sin, trig2 = Trig::sin;
  int m1 = 1, m2 = 1;
  int r1 = 0, r2 = 0;
  double lambda = 0.2;
  double h = 0.0;  // lattice base step; 0 means h_over_eps * eps
  double h_over_eps = 0.5;
  double min_period = 8.0;
  int diagonal_policy = 1;
  int n = 2;
  long n_samples = 4000;
  std::uint64_t seed = 1;
  unsigned workers = 1;

  int resolved_re() const;
  double step(double eps) const;
  RenormKernel kernel() const;
  TwoPointFunctional functional(double theta_x, double theta_y) const;
};

struct ThetaRow {
  double eps = 0.0, lambda = 0.0;
  double theta_x = 0.0, theta_y = 0.0;
  MomentEstimate est;
};

struct FreqSweepReport {
  std::vector<ThetaRow> rows;
  double ratio = 0.0;  // max/min over nonzero estimates
  double h = 0.0;
  nlohmann::json to_json() const;
};

// One field per sample index, every Theta evaluated on the same fields.
FreqSweepReport freq_sweep(const OperatorSetup& s, const std::vector<std::pair<double, double>>& thetas);

struct ScalingPoint {
  double eps = 0.0, lambda = 0.0;
  double theta_x = 0.0, theta_y = 0.0;  // maximizing frequency pair
  MomentEstimate est;
  double bound = 0.0;  // eps^{a-eta} lambda^{b-eta}
  double ratio = 0.0;
  bool flagged = false;  // CI touches zero: excluded from fits
};

// Gate for "dominated by C f(eps, lambda) with one C": the log-ratio, fitted
// jointly in (log eps, log lambda), must not grow toward small scales along
// eps -> 0 at fixed lambda, nor along the diagonal (eps, lambda) -> t(eps, lambda).
struct DominationFit {
  double eps_slope = 0.0;
  double lambda_slope = 0.0;
  double diag_slope = 0.0;
  double max_ratio = 0.0;
  bool finite = true;
  bool dominated = false;
  nlohmann::json to_json() const;
};

DominationFit domination_gate(const std::vector<double>& eps, const std::vector<double>& lambda, const std::vector<double>& ratio,
                              double tol);

struct ScalingReport {
  std::vector<ScalingPoint> grid;
  double a = 0.0, b = 0.0, eta = 0.0;
  double eps_slope = 0.0, eps_slope_se = 0.0;
  double lambda_slope = 0.0, lambda_slope_se = 0.0;
  double C = 0.0;
  DominationFit domination;
  nlohmann::json to_json() const;
};

ScalingReport scaling_scan(const OperatorSetup& s, const std::vector<double>& eps_grid, const std::vector<double>& lambda_grid,
                           const std::vector<std::pair<double, double>>& thetas, double eta);

struct TwoGridCheck {
  double fine = 0.0, coarse = 0.0, rel_diff = 0.0;
};

// A F on one fine sample (step h/2) and on its coarse subsample (step h).
TwoGridCheck operator_two_grid(const OperatorSetup& s, double theta_x, double theta_y, std::uint64_t index);

// ---- deterministic second moments (d = 1) ----

// E Y(y1) Y(y2) for the normalized field Y = eps^{alpha/2} Psi.
double normalized_covariance(const CovarianceSpec& cov, double lag);

struct QuadratureResult {
  double value = 0.0;
  double coarse = 0.0;
  double rel_diff = 0.0;
  int refinements = 0;
};

// G(x)^2 = m2! int int |K(x,y1)| |K(x,y2)| (E Y1 Y2)^{m2} over |y_i| <= 2.
QuadratureResult second_moment_G(double x, const RenormKernel& k, int m2, const CovarianceSpec& cov);
// H(y)^2 = m1! int int |K(x1,y)||K(x2,y)||phi(x1)||phi(x2)| (E X1 X2)^{m1}.
QuadratureResult second_moment_H(double y, const RenormKernel& k, const TestFunction& test, int m1, const CovarianceSpec& cov);

double bound_G(double x, double eps, double gamma, double alpha, int m2, double eta);
double bound_H(double y, double eps, double lambda, double gamma, double alpha, int m1, int re, double total, double eta);

struct EpsSweepReport {
  std::string what;
  double point = 0.0;  // x for G, y for H
  double lambda = 0.0;
  std::vector<double> eps, values, bounds, ratios;
  double slope = 0.0, slope_se = 0.0;
  double predicted = 0.0;
  bool slope_ok = false;
  DominationFit domination;
  nlohmann::json to_json() const;
};

EpsSweepReport sweep_G(double x, const RenormKernel& k, double alpha, int m2, const std::vector<double>& eps_grid, double eta,
                       CovProfile profile = CovProfile::power, double slope_tol = 0.1);
EpsSweepReport sweep_H(double y, double lambda, const RenormKernel& k, double alpha, int m1, const std::vector<double>& eps_grid,
                       double eta, CovProfile profile = CovProfile::power, double slope_tol = 0.1);

// ---- volume lemmas ----

struct VolumePoint {
  int lemma = 1;
  double eps = 0.0, lambda = 0.0;
  double estimate = 0.0, ci_lo = 0.0, ci_hi = 0.0;
  double bound = 0.0, ratio = 0.0;
  long hits = 0, n_mc = 0;
};

struct VolumeLemmaReport {
  int n = 1;
  int re = 0;
  std::vector<VolumePoint> points;
  DominationFit lemma1;
  DominationFit lemma2;
  bool lemma2_skipped = false;
  nlohmann::json to_json() const;
};

// Monte Carlo of the two S^c-restricted singular integrals, importance
// sampled so that every draw carries the same weight. Clustering at scale L*eps.
VolumeLemmaReport volume_lemma_check(int n, const RenormKernel& k, double alpha, int m2, const std::vector<double>& eps_grid,
                                     const std::vector<double>& lambda_grid, double eta, long n_mc, double L = 1.0,
                                     std::uint64_t seed = 1, unsigned workers = 1, double tol = 0.1);

struct VolumeScSweep {
  std::vector<VolumePoint> points;
  DominationFit domination;
  nlohmann::json to_json() const;
};

VolumeScSweep volume_sc_sweep(int n, const ScalingGeometry& g, const std::vector<double>& eps_grid,
                              const std::vector<double>& lambda_grid, long n_mc, double L = 1.0, std::uint64_t seed = 1,
                              double tol = 0.1);

}  // namespace tchaos
