#include "tchaos/isserlis.hpp"

#include <boost/multiprecision/cpp_int.hpp>
#include <cmath>
#include <map>
#include <string>

#include "tchaos/errors.hpp"
#include "tchaos/quadrature.hpp"

namespace tchaos {

using boost::multiprecision::cpp_int;

std::size_t DMatrix::pair_index(std::size_t i, std::size_t j) const {
  if (i == j || i >= n_ || j >= n_) throw DimensionError("DMatrix index out of range or diagonal");
  if (i > j) std::swap(i, j);
  return i * n_ - i * (i + 1) / 2 + (j - i - 1);
}

int DMatrix::at(std::size_t i, std::size_t j) const {
  if (i == j) return 0;
  return upper_[pair_index(i, j)];
}

void DMatrix::set(std::size_t i, std::size_t j, int v) {
  if (v < 0) throw StructuralError("negative DMatrix entry");
  upper_[pair_index(i, j)] = v;
}

int DMatrix::row_sum(std::size_t i) const {
  int s = 0;
  for (std::size_t j = 0; j < n_; ++j)
    if (j != i) s += at(i, j);
  return s;
}

std::vector<int> DMatrix::row_sums() const {
  std::vector<int> r(n_);
  for (std::size_t i = 0; i < n_; ++i) r[i] = row_sum(i);
  return r;
}

namespace {

struct Enumerator {
  std::size_t n;
  std::vector<int> rem;
  DMatrix D;
  const std::function<void(const DMatrix&)>& fn;

  int suffix(std::size_t from) const {
    int s = 0;
    for (std::size_t k = from; k < n; ++k) s += rem[k];
    return s;
  }

  void go(std::size_t i, std::size_t j) {
    if (i + 1 >= n) {
      if (n == 0 || rem[n - 1] == 0) fn(D);
      return;
    }
    if (j >= n) {
      if (rem[i] == 0) go(i + 1, i + 2);
      return;
    }
    // rem[i] must be absorbable by rows j..n-1
    int hi = std::min(rem[i], rem[j]);
    for (int v = 0; v <= hi; ++v) {
      if (rem[i] - v > suffix(j + 1)) continue;
      D.set(i, j, v);
      rem[i] -= v;
      rem[j] -= v;
      go(i, j + 1);
      rem[i] += v;
      rem[j] += v;
    }
    D.set(i, j, 0);
  }
};

}  // namespace

void for_each_dmatrix(const std::vector<int>& row_sums, const std::function<void(const DMatrix&)>& fn) {
  if (row_sums.size() > kMaxDegreeVectorLength)
    throw PreconditionError("degree vector longer than " + std::to_string(kMaxDegreeVectorLength));
  int total = 0;
  for (int r : row_sums) {
    if (r < 0) throw PreconditionError("negative degree");
    total += r;
  }
  if (total % 2) return;
  std::size_t n = row_sums.size();
  if (n == 0) {
    fn(DMatrix(0));
    return;
  }
  if (n == 1) {
    if (row_sums[0] == 0) fn(DMatrix(1));
    return;
  }
  Enumerator e{n, row_sums, DMatrix(n), fn};
  e.go(0, 1);
}

std::vector<DMatrix> enumerate_dmatrices(const std::vector<int>& row_sums) {
  std::vector<DMatrix> out;
  for_each_dmatrix(row_sums, [&](const DMatrix& D) { out.push_back(D); });
  return out;
}

namespace {
cpp_int factorial(int k) {
  cpp_int f = 1;
  for (int i = 2; i <= k; ++i) f *= i;
  return f;
}
}  // namespace

double dmatrix_multiplicity(const DMatrix& D) {
  cpp_int num = 1, den = 1;
  for (int r : D.row_sums()) num *= factorial(r);
  for (int v : D.upper()) den *= factorial(v);
  cpp_int q = num / den;
  return q.convert_to<double>();
}

double dmatrix_weight(const DMatrix& D, const Eigen::MatrixXd& cov) {
  double w = dmatrix_multiplicity(D);
  for (std::size_t i = 0; i < D.size(); ++i)
    for (std::size_t j = i + 1; j < D.size(); ++j) {
      int d = D.at(i, j);
      if (d) w *= std::pow(cov(i, j), d);
    }
  return w;
}

double wick_moment(const std::vector<int>& degrees, const Eigen::MatrixXd& cov) {
  if (static_cast<std::size_t>(cov.rows()) != degrees.size() || cov.rows() != cov.cols())
    throw DimensionError("degree vector and covariance sizes differ");
  long double s = 0.0L;
  for_each_dmatrix(degrees, [&](const DMatrix& D) { s += dmatrix_weight(D, cov); });
  return static_cast<double>(s);
}

std::complex<double> wick_moment_tilted(const std::vector<int>& degrees, const std::vector<double>& t, const Eigen::MatrixXd& cov) {
  std::size_t K = degrees.size();
  if (t.size() != K || static_cast<std::size_t>(cov.rows()) != K) throw DimensionError("size mismatch");
  Eigen::VectorXd tv = Eigen::Map<const Eigen::VectorXd>(t.data(), K);
  Eigen::VectorXd ct = cov * tv;
  double quad = tv.dot(ct);
  std::complex<double> damp = std::exp(-0.5 * quad);
  // (Z + a)^{<>k} = sum_l C(k,l) a^{k-l} Z^{<>l}, a = i (C t)
  std::map<std::vector<int>, double> memo;
  std::vector<int> l(K, 0);
  std::complex<double> total = 0.0;
  std::function<void(std::size_t, std::complex<double>)> rec = [&](std::size_t j, std::complex<double> c) {
    if (j == K) {
      auto it = memo.find(l);
      double m;
      if (it == memo.end()) {
        m = wick_moment(l, cov);
        memo.emplace(l, m);
      } else {
        m = it->second;
      }
      total += c * m;
      return;
    }
    std::complex<double> a(0.0, ct(j));
    double binom = 1.0;
    for (int lj = degrees[j]; lj >= 0; --lj) {
      int p = degrees[j] - lj;
      if (p > 0) binom = binom * (degrees[j] - p + 1) / p;
      std::complex<double> ap = p == 0 ? std::complex<double>(1.0) : std::pow(a, p);
      if (p > 0 && ct(j) == 0.0) continue;
      l[j] = lj;
      rec(j + 1, c * binom * ap);
    }
    l[j] = 0;
  };
  rec(0, 1.0);
  return damp * total;
}

// ---------------- D -> D* ----------------

bool in_class_D(const DMatrix& D, int m1, int m2) {
  int M = std::max(m1, m2) + 1;
  if (D.size() < 1) return false;
  int d0 = D.row_sum(0);
  if (d0 < 0 || d0 > M) return false;
  for (std::size_t i = 1; i < D.size(); ++i) {
    int di = D.row_sum(i);
    if (di < m2 || di > M) return false;
  }
  return true;
}

bool in_class_Dstar(const DMatrix& D, int /*m1*/, int m2) {
  for (std::size_t i = 1; i < D.size(); ++i) {
    if (D.at(0, i) != 0) return false;
    if (D.row_sum(i) < m2) return false;
  }
  return true;
}

DStarResult reduce_to_dstar(const DMatrix& D, double eps, double alpha, int m1, int m2, int merge_increment) {
  if (!in_class_D(D, m1, m2)) throw StructuralError("input matrix is not in the class D for the given (m1, m2)");
  if (merge_increment < 1) throw PreconditionError("merge increment must be positive");
  DStarResult res;
  res.dstar = D;
  DMatrix& E = res.dstar;
  std::size_t K = E.size();
  // move (i): pair up links to the fixed point
  for (;;) {
    bool moved = false;
    for (std::size_t i = 1; i < K && !moved; ++i) {
      if (E.at(0, i) == 0) continue;
      for (std::size_t j = i + 1; j < K; ++j) {
        if (E.at(0, j) == 0) continue;
        E.add(0, i, -1);
        E.add(0, j, -1);
        E.add(i, j, merge_increment);
        ++res.merge_moves;
        moved = true;
        break;
      }
    }
    if (!moved) break;
  }
  // move (ii): drop the remaining link, then rebalance its row
  for (std::size_t is = 1; is < K; ++is) {
    if (E.at(0, is) == 0) continue;
    E.set(0, is, 0);
    while (E.row_sum(is) < m2) {
      bool found = false;
      for (std::size_t i = 1; i < K && !found; ++i) {
        if (i == is) continue;
        for (std::size_t j = i + 1; j < K; ++j) {
          if (j == is || E.at(i, j) == 0) continue;
          E.add(is, i, 1);
          E.add(is, j, 1);
          E.add(i, j, -1);
          ++res.rebalance_moves;
          res.penalty += 2.0 * alpha;
          found = true;
          break;
        }
      }
      if (!found) throw StructuralError("no rebalancing move available; degrees are malformed");
    }
  }
  res.factor = std::pow(eps, -res.penalty);
  return res;
}

// ---------------- cluster coefficients ----------------

Eigen::MatrixXd psd_sqrt(const Eigen::MatrixXd& cov, double tol) {
  if (cov.rows() != cov.cols()) throw DimensionError("covariance is not square");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(cov);
  const auto& ev = es.eigenvalues();
  double scale = std::max(1.0, ev.cwiseAbs().maxCoeff());
  Eigen::VectorXd s(ev.size());
  for (Eigen::Index i = 0; i < ev.size(); ++i) {
    if (ev(i) < -tol * scale) throw PreconditionError("covariance is not positive semidefinite");
    s(i) = std::sqrt(std::max(0.0, ev(i)));
  }
  return es.eigenvectors() * s.asDiagonal() * es.eigenvectors().transpose();
}

double cluster_coeff(const ClusterCoeffQuery& q, int order) {
  std::size_t K = q.degrees.size();
  if (K == 0) return 1.0;
  if (K > kMaxClusterSize) throw PreconditionError("cluster larger than " + std::to_string(kMaxClusterSize));
  if (q.thetas.size() != K || q.derivs.size() != K || q.truncs.size() != K || static_cast<std::size_t>(q.cov.rows()) != K)
    throw DimensionError("cluster query sizes differ");
  Eigen::MatrixXd S = psd_sqrt(q.cov);
  const auto& rule = gauss_hermite_cached(static_cast<std::size_t>(order));
  std::size_t N = rule.nodes.size();
  std::size_t total = 1;
  for (std::size_t k = 0; k < K; ++k) total *= N;
  std::vector<std::size_t> idx(K, 0);
  Eigen::VectorXd g(K);
  long double acc = 0.0L;
  for (std::size_t flat = 0; flat < total; ++flat) {
    std::size_t f = flat;
    double w = 1.0;
    for (std::size_t k = 0; k < K; ++k) {
      idx[k] = f % N;
      f /= N;
      g(k) = rule.nodes[idx[k]];
      w *= rule.weights[idx[k]];
    }
    Eigen::VectorXd z = S * g;
    double v = w;
    for (std::size_t k = 0; k < K && v != 0.0; ++k)
      v *= truncated_trig_deriv(z(k), q.thetas[k], q.truncs[k], q.cov(k, k), q.derivs[k], q.degrees[k]);
    acc += v;
  }
  double nfact = 1.0;
  for (int d : q.degrees) nfact *= std::tgamma(d + 1.0);
  return static_cast<double>(acc) / nfact;
}

}  // namespace tchaos
