#include <cmath>
#include <complex>
#include <functional>
#include <stdexcept>

#include "tchaos/clustering.hpp"
#include "tchaos/errors.hpp"
#include "tchaos/isserlis.hpp"
#include "tchaos/rng.hpp"

namespace tchaos {

const char* lemma_name(LemmaKind k) {
  switch (k) {
    case LemmaKind::comparable: return "comparable";
    case LemmaKind::singleton: return "singleton";
    default: return "fixed";
  }
}

LemmaKind parse_lemma(const std::string& s) {
  if (s == "comparable") return LemmaKind::comparable;
  if (s == "singleton") return LemmaKind::singleton;
  if (s == "fixed") return LemmaKind::fixed;
  throw ConfigError("unknown lemma '" + s + "' (comparable | singleton | fixed)");
}

nlohmann::json RatioReport::to_json() const {
  nlohmann::json j;
  j["lemma"] = lemma;
  j["grid"] = nlohmann::json::array();
  for (const auto& p : grid)
    j["grid"].push_back({{"theta", {p.theta_x, p.theta_y}}, {"ratio", p.ratio}, {"ci", {p.ci_lo, p.ci_hi}}});
  j["max_ratio"] = max_ratio;
  j["rejections"] = rejections;
  j["l0_sensitivity"] = nlohmann::json::array();
  for (auto [l0, r] : l0_max_ratio) j["l0_sensitivity"].push_back({{"L0", l0}, {"max_ratio", r}});
  return j;
}

Eigen::MatrixXd target_correlation(const std::vector<double>& pts, double eps, double alpha) {
  Eigen::Index K = static_cast<Eigen::Index>(pts.size());
  Eigen::MatrixXd C(K, K);
  for (Eigen::Index i = 0; i < K; ++i)
    for (Eigen::Index j = 0; j < K; ++j) C(i, j) = std::pow(eps / (std::fabs(pts[i] - pts[j]) + eps), alpha);
  return C;
}

namespace {

struct Term {
  std::complex<double> coef;
  int degree;
  double freq;
};

// d^r/dtheta^r T(trig(theta Z)) as sum of coef * Z^{<>degree} * exp(i freq Z)
std::vector<Term> expand_factor(const ChaosTruncSpec& spec, double theta, int r, double sigma2) {
  std::vector<Term> out;
  std::vector<double> mono(r + 1, 0.0);
  mono[r] = 1.0;
  std::vector<double> b = wick_expand_polynomial(mono, sigma2);
  // trig^{(r)}(u) = Re(w e^{iu})
  std::complex<double> ir = std::pow(std::complex<double>(0.0, 1.0), r);
  std::complex<double> w = spec.trig == Trig::cos ? ir : std::complex<double>(0.0, -1.0) * ir;
  for (int l = 0; l <= r; ++l) {
    if (b[l] == 0.0) continue;
    out.push_back({0.5 * b[l] * w, l, theta});
    out.push_back({0.5 * b[l] * std::conj(w), l, -theta});
  }
  for (int k = 0; k < spec.m; ++k) {
    double c = coeff_theta_derivative(spec.trig, k, theta, sigma2, r);
    if (c != 0.0) out.push_back({-c, k, 0.0});
  }
  return out;
}

}  // namespace

double trig_product_moment(const std::vector<ChaosTruncSpec>& specs, const std::vector<double>& thetas, const std::vector<int>& derivs,
                           const Eigen::MatrixXd& cov) {
  std::size_t K = specs.size();
  if (thetas.size() != K || derivs.size() != K || static_cast<std::size_t>(cov.rows()) != K) throw DimensionError("size mismatch");
  std::vector<std::vector<Term>> terms(K);
  for (std::size_t j = 0; j < K; ++j) terms[j] = expand_factor(specs[j], thetas[j], derivs[j], cov(j, j));
  std::vector<int> deg(K);
  std::vector<double> t(K);
  std::complex<double> total = 0.0;
  std::function<void(std::size_t, std::complex<double>)> rec = [&](std::size_t j, std::complex<double> c) {
    if (j == K) {
      total += c * wick_moment_tilted(deg, t, cov);
      return;
    }
    for (const auto& tm : terms[j]) {
      deg[j] = tm.degree;
      t[j] = tm.freq;
      rec(j + 1, c * tm.coef);
    }
  };
  rec(0, 1.0);
  return total.real();
}

double wick_sum_moment(const std::vector<int>& lo, const std::vector<int>& hi, const Eigen::MatrixXd& cov) {
  std::size_t K = lo.size();
  if (hi.size() != K || static_cast<std::size_t>(cov.rows()) != K) throw DimensionError("size mismatch");
  std::vector<int> k(K);
  long double s = 0.0L;
  std::function<void(std::size_t)> rec = [&](std::size_t j) {
    if (j == K) {
      s += wick_moment(k, cov);
      return;
    }
    for (int v = lo[j]; v <= hi[j]; ++v) {
      k[j] = v;
      rec(j + 1);
    }
  };
  rec(0);
  return static_cast<double>(s);
}

namespace {

struct LemmaEval {
  double lhs, rhs;
};

LemmaEval eval_lemma(const LemmaConfig& cfg, const std::vector<double>& xs, const std::vector<double>& ys, double tx, double ty) {
  int n2 = 2 * cfg.n;
  int M = std::max(cfg.m1, cfg.m2) + 1;
  auto sx = ChaosTruncSpec::make(cfg.trig1, cfg.m1);
  auto sy = ChaosTruncSpec::make(cfg.trig2, cfg.m2);
  std::vector<double> pts;
  std::vector<ChaosTruncSpec> specs;
  std::vector<double> th;
  std::vector<int> r;
  for (int i = 0; i < n2; ++i) {
    pts.push_back(cfg.kind == LemmaKind::fixed ? xs[0] : xs[i]);
    specs.push_back(sx);
    th.push_back(tx);
    r.push_back(cfg.r1);
  }
  for (int i = 0; i < n2; ++i) {
    pts.push_back(ys[i]);
    specs.push_back(sy);
    th.push_back(ty);
    r.push_back(cfg.r2);
  }
  Eigen::MatrixXd C = target_correlation(pts, cfg.eps, cfg.alpha);
  double lhs = std::fabs(trig_product_moment(specs, th, r, C));
  double rhs;
  if (cfg.kind == LemmaKind::fixed) {
    std::vector<double> yp(ys.begin(), ys.begin() + n2);
    Eigen::MatrixXd Cy = target_correlation(yp, cfg.eps, cfg.alpha);
    std::vector<int> lo(n2, cfg.m2), hi(n2, M);
    rhs = std::pow(cfg.eps, -cfg.alpha * M) * wick_sum_moment(lo, hi, Cy);
  } else {
    std::vector<int> lo, hi;
    for (int i = 0; i < n2; ++i) {
      lo.push_back(cfg.m1);
      hi.push_back(M);
    }
    for (int i = 0; i < n2; ++i) {
      lo.push_back(cfg.m2);
      hi.push_back(M);
    }
    rhs = wick_sum_moment(lo, hi, C);
  }
  return {lhs, rhs};
}

struct SweepResult {
  std::vector<RatioPoint> grid;
  double max_ratio = 0.0;
  long rejections = 0;
};

SweepResult sweep(const LemmaConfig& cfg, double L0) {
  if (2 * cfg.n > 6 && cfg.kind != LemmaKind::fixed) throw PreconditionError("lemma checks support 2n <= 6");
  int n2 = 2 * cfg.n;
  double thr = 100.0 * cfg.n * (1.0 + cfg.lambda_const * cfg.lambda_const);
  double L = 3.0 * cfg.n * L0;
  double box = cfg.box > 0.0 ? cfg.box : (cfg.kind == LemmaKind::singleton ? 1.5 * L * cfg.eps : 4.0 * cfg.eps);
  ScalingGeometry g({1.0});
  SweepResult out;
  // point configurations are shared across the frequency grid
  std::vector<std::vector<double>> xs, ys;
  Stream rs(cfg.seed, static_cast<std::uint64_t>(cfg.kind), stream_tag::points);
  long guard = 0;
  while (static_cast<int>(xs.size()) < cfg.n_configs) {
    if (++guard > 1000L * cfg.n_configs) throw ResourceError("lemma hypothesis rejects almost every configuration; enlarge the box");
    std::vector<double> x(n2), y(n2);
    for (auto& v : x) v = (2.0 * rs.uniform() - 1.0) * box;
    for (auto& v : y) v = (2.0 * rs.uniform() - 1.0) * box;
    if (cfg.kind == LemmaKind::singleton) {
      std::vector<Point> P;
      for (double v : x) P.push_back({v});
      if (!in_S2n(P, L * cfg.eps, g)) {
        ++out.rejections;
        continue;
      }
    }
    xs.push_back(x);
    ys.push_back(y);
  }
  for (double base : cfg.thetas) {
    double tx = base, ty = base;
    if (cfg.kind != LemmaKind::comparable) {
      tx = base * cfg.ratio;
      ty = base;
      if (!(std::fabs(tx) > thr * std::fabs(ty))) throw PreconditionError("frequency ratio below the lemma's threshold");
    }
    RatioPoint p{tx, ty, 0.0, INFINITY, 0.0};
    for (std::size_t c = 0; c < xs.size(); ++c) {
      auto e = eval_lemma(cfg, xs[c], ys[c], tx, ty);
      double ratio = e.rhs > 0.0 ? e.lhs / e.rhs : (e.lhs == 0.0 ? 0.0 : INFINITY);
      p.ratio = std::max(p.ratio, ratio);
      p.ci_lo = std::min(p.ci_lo, ratio);
      p.ci_hi = std::max(p.ci_hi, ratio);
    }
    out.max_ratio = std::max(out.max_ratio, p.ratio);
    out.grid.push_back(p);
  }
  return out;
}

}  // namespace

RatioReport check_correlation_lemma(const LemmaConfig& cfg) {
  RatioReport rep;
  rep.lemma = lemma_name(cfg.kind);
  auto main = sweep(cfg, cfg.L0);
  rep.grid = main.grid;
  rep.max_ratio = main.max_ratio;
  rep.rejections = main.rejections;
  for (double l0 : cfg.l0_sensitivity) {
    if (cfg.kind == LemmaKind::singleton && l0 != cfg.L0)
      rep.l0_max_ratio.emplace_back(l0, sweep(cfg, l0).max_ratio);
    else
      rep.l0_max_ratio.emplace_back(l0, main.max_ratio);
  }
  return rep;
}

}  // namespace tchaos
