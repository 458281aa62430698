#pragma once
#include <Eigen/Dense>
#include <complex>
#include <cstddef>
#include <functional>
#include <nlohmann/json.hpp>
#include <vector>

#include "tchaos/chaos.hpp"

namespace tchaos {

// Symmetric, zero-diagonal, nonnegative integer matrix stored by its upper
// triangle in lexicographic pair order (0,1),(0,2),...,(1,2),...
class DMatrix {
 public:
  DMatrix() = default;
  explicit DMatrix(std::size_t n) : n_(n), upper_(n * (n > 0 ? n - 1 : 0) / 2, 0) {}

  std::size_t size() const { return n_; }
  int at(std::size_t i, std::size_t j) const;
  void set(std::size_t i, std::size_t j, int v);
  void add(std::size_t i, std::size_t j, int dv) { set(i, j, at(i, j) + dv); }
  int row_sum(std::size_t i) const;
  std::vector<int> row_sums() const;
  const std::vector<int>& upper() const { return upper_; }
  bool operator==(const DMatrix& o) const { return n_ == o.n_ && upper_ == o.upper_; }

 private:
  std::size_t pair_index(std::size_t i, std::size_t j) const;
  std::size_t n_ = 0;
  std::vector<int> upper_;
};

inline constexpr std::size_t kMaxDegreeVectorLength = 10;

// Visits every DMatrix with the given row sums, lexicographic in the upper triangle.
void for_each_dmatrix(const std::vector<int>& row_sums, const std::function<void(const DMatrix&)>& fn);
std::vector<DMatrix> enumerate_dmatrices(const std::vector<int>& row_sums);

// prod n_i! / prod d_ij!, exact then rounded to double.
double dmatrix_multiplicity(const DMatrix& D);
// multiplicity * prod c_ij^{d_ij}
double dmatrix_weight(const DMatrix& D, const Eigen::MatrixXd& cov);

// E prod_i Z_i^{<> n_i} for a centered Gaussian vector with covariance cov.
double wick_moment(const std::vector<int>& degrees, const Eigen::MatrixXd& cov);

// E[ prod_j Z_j^{<> k_j} exp(i <t, Z>) ], exact (Cameron-Martin shift).
std::complex<double> wick_moment_tilted(const std::vector<int>& degrees, const std::vector<double>& t, const Eigen::MatrixXd& cov);

struct DStarResult {
  DMatrix dstar;
  double penalty = 0.0;  // epsilon exponent lost
  double factor = 1.0;   // eps^{-penalty}
  int merge_moves = 0;
  int rebalance_moves = 0;
};

// Reduction of a matrix in the class D (index 0 is the fixed point x) to D*.
// merge_increment is the d_ij gain of move (i); see README for why 1 is the default.
DStarResult reduce_to_dstar(const DMatrix& D, double eps, double alpha, int m1, int m2, int merge_increment = 1);
bool in_class_D(const DMatrix& D, int m1, int m2);
bool in_class_Dstar(const DMatrix& D, int m1, int m2);

struct ClusterCoeffQuery {
  std::vector<int> degrees;          // n_u
  std::vector<double> thetas;        // Theta_u
  std::vector<int> derivs;           // r_u
  std::vector<ChaosTruncSpec> truncs;  // trig and t_j (m = t_j)
  Eigen::MatrixXd cov;
};

inline constexpr std::size_t kMaxClusterSize = 4;
inline constexpr int kClusterQuadratureOrder = 60;

// (1/n!) E prod_j d_theta^{r_j} d_Z^{n_j} T(trig(theta_j Z_j)), tensor Gauss-Hermite.
double cluster_coeff(const ClusterCoeffQuery& q, int order = kClusterQuadratureOrder);

// Symmetric PSD square root via eigen-decomposition; throws on a negative eigenvalue.
Eigen::MatrixXd psd_sqrt(const Eigen::MatrixXd& cov, double tol = 1e-10);

// ---- correlation lemmas ----

enum class LemmaKind { comparable, singleton, fixed };
const char* lemma_name(LemmaKind k);
LemmaKind parse_lemma(const std::string& s);

struct LemmaConfig {
  LemmaKind kind = LemmaKind::comparable;
  int n = 1;
  double alpha = 0.6;
  double eps = 0.05;
  int m1 = 1, m2 = 1;
  Trig trig1 = Trig::sin, trig2 = Trig::sin;
  int r1 = 0, r2 = 0;
  double lambda_const = 1.0;
  double L0 = 8.0;
  std::vector<double> thetas{1.0, 10.0, 100.0};  // base frequency sweep
  double ratio = 1000.0;                         // theta_x / theta_y for the asymmetric lemmas
  int n_configs = 50;
  double box = 0.0;  // half-width of the sampling box (0 = automatic)
  std::uint64_t seed = 1;
  std::vector<double> l0_sensitivity{2.0, 4.0, 8.0, 16.0};
};

struct RatioPoint {
  double theta_x = 0, theta_y = 0;
  double ratio = 0;
  double ci_lo = 0, ci_hi = 0;
};

struct RatioReport {
  std::string lemma;
  std::vector<RatioPoint> grid;
  double max_ratio = 0;
  long rejections = 0;
  std::vector<std::pair<double, double>> l0_max_ratio;
  nlohmann::json to_json() const;
};

// Normalized target covariance (eps/(|x-y|+eps))^alpha on 1-d points.
Eigen::MatrixXd target_correlation(const std::vector<double>& pts, double eps, double alpha);

// Exact E prod_j d^{r_j}_theta T(trig_j(theta_j Z_j)) for a Gaussian vector.
double trig_product_moment(const std::vector<ChaosTruncSpec>& specs, const std::vector<double>& thetas,
                           const std::vector<int>& derivs, const Eigen::MatrixXd& cov);

// E prod_j (sum_{k=lo_j}^{hi_j} Z_j^{<>k})
double wick_sum_moment(const std::vector<int>& lo, const std::vector<int>& hi, const Eigen::MatrixXd& cov);

RatioReport check_correlation_lemma(const LemmaConfig& cfg);

}  // namespace tchaos
