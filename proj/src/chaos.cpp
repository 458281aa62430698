#include "tchaos/chaos.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "tchaos/errors.hpp"

namespace tchaos {

const char* trig_name(Trig t) { return t == Trig::cos ? "cos" : "sin"; }

double hermite_prob(int k, double x) {
  if (k < 0) return 0.0;
  double h0 = 1.0, h1 = x;
  if (k == 0) return h0;
  for (int j = 1; j < k; ++j) {
    double h2 = x * h1 - j * h0;
    h0 = h1;
    h1 = h2;
  }
  return h1;
}

void hermite_all(int kmax, double x, double* out) {
  if (kmax < 0) return;
  out[0] = 1.0;
  if (kmax >= 1) out[1] = x;
  for (int j = 1; j < kmax; ++j) out[j + 1] = x * out[j] - j * out[j - 1];
}

double wick_power(double x, int k, double sigma2) {
  if (k < 0) return 0.0;
  // sigma^k He_k(x/sigma) via the scaled recurrence w_{j+1} = x w_j - j sigma2 w_{j-1}
  double w0 = 1.0, w1 = x;
  if (k == 0) return w0;
  for (int j = 1; j < k; ++j) {
    double w2 = x * w1 - j * sigma2 * w0;
    w0 = w1;
    w1 = w2;
  }
  return w1;
}

void wick_powers(int kmax, double x, double sigma2, double* out) {
  if (kmax < 0) return;
  out[0] = 1.0;
  if (kmax >= 1) out[1] = x;
  for (int j = 1; j < kmax; ++j) out[j + 1] = x * out[j] - j * sigma2 * out[j - 1];
}

double trig_derivative(Trig t, int n, double u) {
  int q = ((n % 4) + 4) % 4;
  if (t == Trig::cos) {
    switch (q) {
      case 0: return std::cos(u);
      case 1: return -std::sin(u);
      case 2: return -std::cos(u);
      default: return std::sin(u);
    }
  }
  switch (q) {
    case 0: return std::sin(u);
    case 1: return std::cos(u);
    case 2: return -std::sin(u);
    default: return -std::cos(u);
  }
}

double LogCoeff::value() const { return sign == 0 ? 0.0 : sign * std::exp(log_mag); }

namespace {

// sign of the k-th coefficient ignoring theta's sign; 0 on the wrong parity
int parity_sign(Trig t, int k) {
  if (t == Trig::cos) {
    if (k % 2) return 0;
    return (k / 2) % 2 ? -1 : 1;
  }
  if (k % 2 == 0) return 0;
  return ((k - 1) / 2) % 2 ? -1 : 1;
}

}  // namespace

LogCoeff trig_chaos_coeff_log(Trig t, int k, double theta, double sigma2) {
  LogCoeff c;
  if (k < 0) return c;
  int s = parity_sign(t, k);
  if (s == 0) return c;
  if (k > 0 && theta == 0.0) return c;
  if (theta < 0.0 && (k % 2)) s = -s;
  c.sign = s;
  c.log_mag = -0.5 * theta * theta * sigma2 - std::lgamma(k + 1.0) + (k > 0 ? k * std::log(std::fabs(theta)) : 0.0);
  return c;
}

double trig_chaos_coeff(Trig t, int k, double theta, double sigma2) { return trig_chaos_coeff_log(t, k, theta, sigma2).value(); }

double coeff_theta_derivative(Trig t, int k, double theta, double sigma2, int r) {
  if (r == 0) return trig_chaos_coeff(t, k, theta, sigma2);
  int s = parity_sign(t, k);
  if (s == 0) return 0.0;
  // c_k = s theta^k g(theta)/k!,  g = exp(-a theta^2/2),  g^{(q)} = (-sqrt a)^q He_q(sqrt a theta) g
  double a = sigma2, sa = std::sqrt(a);
  double lg = -0.5 * a * theta * theta;
  double total = 0.0;
  for (int j = 0; j <= std::min(r, k); ++j) {
    int p = k - j;  // power of theta
    int q = r - j;  // derivatives on g
    double he = hermite_prob(q, sa * theta);
    if (he == 0.0) continue;
    if (p > 0 && theta == 0.0) continue;
    // log of C(r,j) k!/(k-j)! / k! = log C(r,j) - lgamma(p+1)
    double lc = std::lgamma(r + 1.0) - std::lgamma(j + 1.0) - std::lgamma(q + 1.0) - std::lgamma(p + 1.0);
    double lm = lc + lg + (p > 0 ? p * std::log(std::fabs(theta)) : 0.0) + (q > 0 ? q * std::log(sa) : 0.0) + std::log(std::fabs(he));
    int sg = s * (he < 0 ? -1 : 1) * ((q % 2) ? -1 : 1) * ((theta < 0.0 && (p % 2)) ? -1 : 1);
    total += sg * std::exp(lm);
  }
  return total;
}

ChaosTruncSpec ChaosTruncSpec::make(Trig t, int m) {
  if (m < 0) throw PreconditionError("truncation order must be nonnegative");
  ChaosTruncSpec s;
  s.trig = t;
  s.m = m;
  s.parity_ok = (m == 0) || (t == Trig::cos ? m % 2 == 0 : m % 2 == 1);
  if (!s.parity_ok)
    throw PreconditionError(std::string("parity violation: m=") + std::to_string(m) + " with trig=" + trig_name(t) +
                            " (cos needs even m, sin odd m)");
  return s;
}

double truncated_trig(double x, double theta, const ChaosTruncSpec& spec, double sigma2) {
  double v = trig_derivative(spec.trig, 0, theta * x);
  for (int k = 0; k < spec.m; ++k) {
    double c = trig_chaos_coeff(spec.trig, k, theta, sigma2);
    if (c != 0.0) v -= c * wick_power(x, k, sigma2);
  }
  return v;
}

double truncated_trig_deriv(double x, double theta, const ChaosTruncSpec& spec, double sigma2, int r, int n) {
  // d^n/dx^n [x^r trig^{(r)}(theta x)] = sum_q C(n,q) r!/(r-q)! x^{r-q} theta^{n-q} trig^{(r+n-q)}(theta x)
  double v = 0.0;
  double binom = 1.0;
  for (int q = 0; q <= std::min(n, r); ++q) {
    if (q > 0) binom = binom * (n - q + 1) / q;
    double fall = 1.0;
    for (int i = 0; i < q; ++i) fall *= (r - i);
    double term = binom * fall * std::pow(x, r - q) * std::pow(theta, n - q) * trig_derivative(spec.trig, r + n - q, theta * x);
    v += term;
  }
  // d^n/dx^n He^sigma_k = k!/(k-n)! He^sigma_{k-n}
  for (int k = n; k < spec.m; ++k) {
    double c = coeff_theta_derivative(spec.trig, k, theta, sigma2, r);
    if (c == 0.0) continue;
    double fall = 1.0;
    for (int i = 0; i < n; ++i) fall *= (k - i);
    v -= c * fall * wick_power(x, k - n, sigma2);
  }
  return v;
}

TruncTrigFactor::TruncTrigFactor(const ChaosTruncSpec& spec, double theta, int r, double sigma2)
    : spec_(spec), theta_(theta), r_(r), sigma2_(sigma2) {
  if (r < 0) throw PreconditionError("negative derivative order");
  coeff_.resize(spec.m);
  for (int k = 0; k < spec.m; ++k) coeff_[k] = coeff_theta_derivative(spec.trig, k, theta, sigma2, r);
  // At theta = 0 the function is x^r trig^{(r)}(0) minus its chaos orders < m.
  // x^r trig^{(r)}(0) is a multiple of x^r, whose chaos orders are <= r.
  if (theta == 0.0 && r < spec.m) vanishes_ = true;
}

double TruncTrigFactor::operator()(double x) const {
  if (vanishes_) return 0.0;
  double v = (r_ == 0 ? 1.0 : std::pow(x, r_)) * trig_derivative(spec_.trig, r_, theta_ * x);
  if (spec_.m > 0) {
    double w0 = 1.0, w1 = x;
    v -= coeff_[0] * w0;
    for (int k = 1; k < spec_.m; ++k) {
      v -= coeff_[k] * w1;
      double w2 = x * w1 - k * sigma2_ * w0;
      w0 = w1;
      w1 = w2;
    }
  }
  return v;
}

double eval_functional(const TwoPointFunctional& F, double x_val, double y_val, double sigma2x, double sigma2y) {
  if (!F.spec_x.parity_ok || !F.spec_y.parity_ok) throw PreconditionError("parity violation");
  if (F.r1 < 0 || F.r2 < 0 || F.r1 > F.max_deriv || F.r2 > F.max_deriv)
    throw PreconditionError("derivative order outside [0, " + std::to_string(F.max_deriv) + "]");
  double fx = truncated_trig_deriv(x_val, F.theta_x, F.spec_x, sigma2x, F.r1);
  if (fx == 0.0) return 0.0;
  return fx * truncated_trig_deriv(y_val, F.theta_y, F.spec_y, sigma2y, F.r2);
}

std::vector<double> wick_expand_polynomial(const std::vector<double>& a, double sigma2) {
  // u^n = sum_j n!/(j! (n-2j)! 2^j) sigma2^j u^{<>(n-2j)}
  std::vector<double> b(a.size(), 0.0);
  for (std::size_t n = 0; n < a.size(); ++n) {
    if (a[n] == 0.0) continue;
    for (std::size_t j = 0; 2 * j <= n; ++j) {
      double lc = std::lgamma(n + 1.0) - std::lgamma(j + 1.0) - std::lgamma(n - 2.0 * j + 1.0) - j * std::log(2.0);
      b[n - 2 * j] += a[n] * std::exp(lc) * std::pow(sigma2, static_cast<double>(j));
    }
  }
  return b;
}

}  // namespace tchaos
