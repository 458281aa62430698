#pragma once
#include <vector>

namespace tchaos {

enum class Trig { cos, sin };

const char* trig_name(Trig t);

// Probabilists' Hermite He_k, three-term recurrence.
double hermite_prob(int k, double x);
// out[0..kmax] = He_0(x)..He_kmax(x)
void hermite_all(int kmax, double x, double* out);

// Z^{<>k} = sigma^k He_k(Z/sigma)
double wick_power(double x, int k, double sigma2);
// all Wick powers 0..kmax at x
void wick_powers(int kmax, double x, double sigma2, double* out);

// d^n/du^n trig(u)
double trig_derivative(Trig t, int n, double u);

// Signed log-magnitude. sign = 0 encodes an exact zero.
struct LogCoeff {
  double log_mag = 0.0;
  int sign = 0;
  double value() const;
};

// Coefficient of Z^{<>k} in trig(theta Z), Z ~ N(0, sigma2).
LogCoeff trig_chaos_coeff_log(Trig t, int k, double theta, double sigma2);
double trig_chaos_coeff(Trig t, int k, double theta, double sigma2);
// d^r/dtheta^r of the coefficient above.
double coeff_theta_derivative(Trig t, int k, double theta, double sigma2, int r);

struct ChaosTruncSpec {
  Trig trig = Trig::cos;
  int m = 0;  // chaos orders < m removed; m = 0 keeps everything
  bool parity_ok = true;

  // Rejects m of the wrong parity (cos needs even m, sin odd m; m=0 allowed).
  static ChaosTruncSpec make(Trig t, int m);
};

// trig(theta x) - sum_{k<m} c_k He^sigma_k(x)
double truncated_trig(double x, double theta, const ChaosTruncSpec& spec, double sigma2);

// d^r/dtheta^r d^n/dx^n of the truncated function.
double truncated_trig_deriv(double x, double theta, const ChaosTruncSpec& spec, double sigma2, int r, int n = 0);

// Hot-path evaluator of d^r/dtheta^r T(trig(theta x)) with the coefficient
// derivatives precomputed.
class TruncTrigFactor {
 public:
  TruncTrigFactor(const ChaosTruncSpec& spec, double theta, int r, double sigma2);
  double operator()(double x) const;
  // True when the function is identically zero (theta = 0 with all chaos removed).
  bool vanishes() const { return vanishes_; }

 private:
  ChaosTruncSpec spec_;
  double theta_;
  int r_;
  double sigma2_;
  std::vector<double> coeff_;
  bool vanishes_ = false;
};

inline constexpr int kMaxThetaDerivative = 8;

struct TwoPointFunctional {
  ChaosTruncSpec spec_x;
  ChaosTruncSpec spec_y;
  double theta_x = 0.0;
  double theta_y = 0.0;
  int r1 = 0;
  int r2 = 0;
  int max_deriv = kMaxThetaDerivative;
};

double eval_functional(const TwoPointFunctional& F, double x_val, double y_val, double sigma2x, double sigma2y);

// Coefficients b_k with p(Z) = sum_k b_k Z^{<>k}, Z ~ N(0, sigma2),
// for the polynomial p(u) = sum_n a[n] u^n.
std::vector<double> wick_expand_polynomial(const std::vector<double>& a, double sigma2);

}  // namespace tchaos
