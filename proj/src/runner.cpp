#include "tchaos/runner.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>

#include "tchaos/chaos.hpp"
#include "tchaos/clustering.hpp"
#include "tchaos/errors.hpp"
#include "tchaos/experiments.hpp"
#include "tchaos/field.hpp"
#include "tchaos/isserlis.hpp"
#include "tchaos/kernel.hpp"
#include "tchaos/models.hpp"
#include "tchaos/nonlinearity.hpp"
#include "tchaos/parallel.hpp"
#include "tchaos/rng.hpp"
#include "tchaos/stats.hpp"

#ifndef TCHAOS_GIT_DESCRIBE
#define TCHAOS_GIT_DESCRIBE "unknown"
#endif

namespace tchaos {

using json = nlohmann::json;

const char* git_describe() { return TCHAOS_GIT_DESCRIBE; }

const std::vector<std::string>& experiment_names() {
  static const std::vector<std::string> names{"verify-cov",    "isserlis-check", "kernel-check", "freq-sweep",
                                              "scaling-scan",  "volume-check",   "fourier-decay", "lemma-check",
                                              "kpz-object",    "phi43-object",   "remainder-sweep", "mollification-gap"};
  return names;
}

std::string fmt_double(double v) {
  if (std::isnan(v)) return "nan";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string CsvTable::render(std::uint64_t seed) const {
  std::string out = "eps,lambda,theta_x,theta_y,n,estimate,ci_lo,ci_hi,n_samples,seed";
  for (const auto& c : extra_columns) out += "," + c;
  out += "\n";
  for (const auto& r : rows) {
    out += fmt_double(r.eps) + "," + fmt_double(r.lambda) + "," + fmt_double(r.theta_x) + "," + fmt_double(r.theta_y) + "," +
           std::to_string(r.n) + "," + fmt_double(r.estimate) + "," + fmt_double(r.ci_lo) + "," + fmt_double(r.ci_hi) + "," +
           std::to_string(r.n_samples) + "," + std::to_string(seed);
    for (std::size_t i = 0; i < extra_columns.size(); ++i) out += "," + (i < r.extra.size() ? r.extra[i] : std::string("nan"));
    out += "\n";
  }
  return out;
}

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

Trig parse_trig(const std::string& s) {
  if (s == "sin") return Trig::sin;
  if (s == "cos") return Trig::cos;
  throw ConfigError("trig must be sin or cos");
}

std::vector<double> or_single(const std::vector<double>& g, double v) { return g.empty() ? std::vector<double>{v} : g; }

CovarianceSpec covariance(const ExperimentConfig& c, double eps) {
  CovarianceSpec cov;
  cov.alpha = c.alpha;
  cov.epsilon = eps;
  cov.lambda_const = c.lambda_const;
  cov.profile = parse_profile(c.profile);
  cov.clip_threshold = c.clip_threshold;
  return cov;
}

OperatorSetup operator_setup(const ExperimentConfig& c) {
  OperatorSetup s;
  s.geometry = ScalingGeometry(c.s);
  s.cov = covariance(c, c.epsilon);
  s.gamma = c.gamma;
  s.re = c.re;
  s.cutoff = c.cutoff;
  s.trig1 = parse_trig(c.trig1);
  s.trig2 = parse_trig(c.trig2);
  s.m1 = c.m1;
  s.m2 = c.m2;
  s.r1 = c.r1;
  s.r2 = c.r2;
  s.lambda = c.lambda;
  s.h_over_eps = c.h_over_eps;
  s.min_period = c.min_period;
  s.diagonal_policy = c.diagonal_policy;
  s.n = c.n;
  s.n_samples = c.n_samples;
  s.seed = c.seed;
  s.workers = c.workers;
  return s;
}

RenormKernel kernel_of(const ExperimentConfig& c) {
  int re = c.re >= 0 ? c.re : compute_re(c.gamma, c.alpha, c.m2);
  return RenormKernel(ScalingGeometry(c.s), c.gamma, re, c.cutoff);
}

NonlinearitySpec nonlinearity_of(const ExperimentConfig& c) {
  return make_nonlinearity(parse_nonlinearity_kind(c.nl_kind), c.beta, c.coeffs);
}

CsvRow row(double eps, double lambda, double tx, double ty, int n, double est, double lo, double hi, long ns,
           std::vector<std::string> extra = {}) {
  CsvRow r;
  r.eps = eps;
  r.lambda = lambda;
  r.theta_x = tx;
  r.theta_y = ty;
  r.n = n;
  r.estimate = est;
  r.ci_lo = lo;
  r.ci_hi = hi;
  r.n_samples = ns;
  r.extra = std::move(extra);
  return r;
}

std::string S(double v) { return fmt_double(v); }

// ---- experiments ----

void verify_cov(const ExperimentConfig& c, RunResult& r) {
  ScalingGeometry g(c.s);
  r.table.extra_columns = {"lag", "target", "lambda_hat", "clipped_mass"};
  bool ok = true;
  json per = json::array();
  for (double eps : or_single(c.eps_grid, c.epsilon)) {
    double h = c.h_over_eps * eps;
    Lattice L = c.points > 0 && g.d() == 1 ? periodic_lattice(g, h, {c.points}) : field_lattice(g, h, c.min_period);
    Spectrum sp = build_spectrum(covariance(c, eps), L);
    SandwichReport rep = verify_assumption1(sp, c.n_samples, c.seed, c.workers);
    for (const auto& le : rep.per_lag)
      r.table.rows.push_back(row(eps, kNaN, kNaN, kNaN, 1, le.c_hat, le.lo, le.hi, c.n_samples,
                                 {S(le.lag), S(le.target), S(rep.lambda_hat), S(rep.clipped_mass)}));
    bool pass = rep.lambda_hat <= c.lambda_const && rep.clipped_mass < c.clip_threshold;
    ok = ok && pass;
    json j = rep.to_json();
    j["eps"] = eps;
    j["points"] = L.size();
    j["pass"] = pass;
    per.push_back(j);
  }
  r.summary = {{"per_eps", per}};
  r.gate_passed = ok;
}

void isserlis_check(const ExperimentConfig& c, RunResult& r) {
  r.table.extra_columns = {"degrees", "exact", "mc_mean", "mc_se"};
  const std::vector<std::vector<int>> degs{{1, 1}, {2, 2}, {1, 1, 2}, {2, 1, 1}, {3, 1, 2}, {2, 2, 2}, {1, 2, 3}};
  bool ok = true;
  std::size_t trial = 0;
  for (const auto& d : degs) {
    const std::size_t k = d.size();
    Stream rs(c.seed, trial++, stream_tag::points);
    Eigen::MatrixXd B(k, k);
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t j = 0; j < k; ++j) B(i, j) = rs.normal();
    Eigen::MatrixXd cov = B * B.transpose() / static_cast<double>(k) + 0.1 * Eigen::MatrixXd::Identity(k, k);
    double exact = wick_moment(d, cov);
    Eigen::LLT<Eigen::MatrixXd> llt(cov);
    Eigen::MatrixXd A = llt.matrixL();
    std::vector<double> v(static_cast<std::size_t>(c.n_samples));
    for (std::size_t s = 0; s < v.size(); ++s) {
      Stream ms(c.seed, s, stream_tag::mc + static_cast<std::uint32_t>(16 * trial));
      Eigen::VectorXd gz(k);
      for (std::size_t i = 0; i < k; ++i) gz(i) = ms.normal();
      Eigen::VectorXd z = A * gz;
      double p = 1.0;
      for (std::size_t i = 0; i < k; ++i) p *= wick_power(z(i), d[i], cov(i, i));
      v[s] = p;
    }
    double m = mean(v), ss = 0.0;
    for (double x : v) ss += (x - m) * (x - m);
    double se = std::sqrt(ss / static_cast<double>(v.size() - 1) / static_cast<double>(v.size()));
    bool pass = std::fabs(m - exact) <= 4.0 * se + 1e-12;
    ok = ok && pass;
    std::string ds;
    for (int x : d) ds += (ds.empty() ? "" : " ") + std::to_string(x);
    r.table.rows.push_back(row(kNaN, kNaN, kNaN, kNaN, 1, exact, m - 1.96 * se, m + 1.96 * se, c.n_samples,
                               {ds, S(exact), S(m), S(se)}));
  }
  // every matrix of the class D (fixed point plus two points) reduces into D*
  long total = 0, failures = 0;
  int M = std::max(c.m1, c.m2) + 1;
  for (int r0 = 0; r0 <= M; ++r0)
    for (int r1 = c.m2; r1 <= M; ++r1)
      for (int r2 = c.m2; r2 <= M; ++r2)
        for_each_dmatrix({r0, r1, r2}, [&](const DMatrix& D) {
          ++total;
          try {
            DStarResult res = reduce_to_dstar(D, c.epsilon, c.alpha, c.m1, c.m2);
            if (!in_class_Dstar(res.dstar, c.m1, c.m2)) ++failures;
          } catch (const StructuralError&) {
            ++failures;
          }
        });
  ok = ok && failures == 0;
  r.summary = {{"dstar_matrices", total}, {"dstar_failures", failures}};
  r.gate_passed = ok;
}

void kernel_check(const ExperimentConfig& c, RunResult& r) {
  ScalingGeometry g(c.s);
  r.table.extra_columns = {"re", "region", "max_ratio_doubled", "rel_change"};
  std::vector<int> res = c.re >= 0 ? std::vector<int>{c.re} : std::vector<int>{0, 1};
  bool ok = true;
  json per = json::array();
  for (int re : res) {
    RenormKernel k(g, c.gamma, re, c.cutoff);
    BoundReport a = check_region_bounds(k, c.kernel_samples, c.seed);
    BoundReport b = check_region_bounds(k, 2 * c.kernel_samples, c.seed);
    for (std::size_t i = 0; i < a.regions.size(); ++i) {
      double ra = a.regions[i].max_ratio, rb = b.regions[i].max_ratio;
      double rel = ra > 0.0 ? std::fabs(rb / ra - 1.0) : 0.0;
      bool pass = std::isfinite(ra) && std::isfinite(rb) && rel <= 0.2;
      ok = ok && pass;
      r.table.rows.push_back(row(kNaN, kNaN, kNaN, kNaN, 1, ra, kNaN, kNaN, c.kernel_samples,
                                 {std::to_string(re), a.regions[i].region, S(rb), S(rel)}));
    }
    Point y(g.d(), 0.5), dir(g.d(), 1.0);
    SlopeFit sf = taylor_slope(k, y, dir);
    bool slope_ok = sf.slope >= re - 0.05;
    ok = ok && slope_ok;
    per.push_back({{"re", re}, {"bounds", a.to_json()}, {"bounds_doubled", b.to_json()}, {"taylor_slope", sf.slope},
                   {"taylor_slope_ok", slope_ok}});
  }
  r.summary = {{"per_re", per}};
  r.gate_passed = ok;
}

std::vector<std::pair<double, double>> sweep_thetas(const ExperimentConfig& c) {
  std::vector<std::pair<double, double>> t;
  for (double v : c.theta_values) t.emplace_back(v, c.theta_base);
  for (double v : c.theta_values)
    if (v != c.theta_base) t.emplace_back(c.theta_base, v);
  return t;
}

double ratio_of(const std::vector<double>& v) {
  double mx = 0.0, mn = std::numeric_limits<double>::infinity();
  for (double x : v)
    if (x > 0.0) {
      mx = std::max(mx, x);
      mn = std::min(mn, x);
    }
  return mx > 0.0 ? mx / mn : 0.0;
}

void freq_sweep_exp(const ExperimentConfig& c, RunResult& r) {
  OperatorSetup s = operator_setup(c);
  FreqSweepReport rep = freq_sweep(s, sweep_thetas(c));
  r.table.extra_columns = {"sweep"};
  std::vector<double> vx, vy;
  for (const auto& row_ : rep.rows) {
    bool in_x = row_.theta_y == c.theta_base, in_y = row_.theta_x == c.theta_base;
    if (in_x) vx.push_back(row_.est.value);
    if (in_y) vy.push_back(row_.est.value);
    r.table.rows.push_back(row(row_.eps, row_.lambda, row_.theta_x, row_.theta_y, row_.est.n, row_.est.value, row_.est.ci_lo,
                               row_.est.ci_hi, row_.est.n_samples, {in_x && in_y ? "both" : in_x ? "theta_x" : "theta_y"}));
  }
  double rx = ratio_of(vx), ry = ratio_of(vy);
  r.gate_passed = rx > 0.0 && ry > 0.0 && rx < c.freq_ratio_max && ry < c.freq_ratio_max;
  r.summary = rep.to_json();
  r.summary["ratio_theta_x"] = rx;
  r.summary["ratio_theta_y"] = ry;
  r.summary["ratio_max"] = c.freq_ratio_max;
}

void scaling_scan_exp(const ExperimentConfig& c, RunResult& r) {
  OperatorSetup s = operator_setup(c);
  auto thetas = c.thetas.empty() ? sweep_thetas(c) : c.thetas;
  ScalingReport rep = scaling_scan(s, or_single(c.eps_grid, c.epsilon), or_single(c.lambda_grid, c.lambda), thetas, c.eta);
  r.table.extra_columns = {"bound", "ratio", "flagged"};
  for (const auto& p : rep.grid)
    r.table.rows.push_back(row(p.eps, p.lambda, p.theta_x, p.theta_y, p.est.n, p.est.value, p.est.ci_lo, p.est.ci_hi,
                               p.est.n_samples, {S(p.bound), S(p.ratio), p.flagged ? "1" : "0"}));
  r.summary = rep.to_json();
  r.summary["eps_slope_min"] = c.eps_slope_min;
  r.gate_passed = rep.domination.dominated && rep.eps_slope >= c.eps_slope_min;
}

void volume_check(const ExperimentConfig& c, RunResult& r) {
  ScalingGeometry g(c.s);
  auto eg = or_single(c.eps_grid, c.epsilon), lg = or_single(c.lambda_grid, c.lambda);
  r.table.extra_columns = {"quantity", "bound", "ratio", "hits"};
  long violations = 0;
  json parts = json::array();
  std::uint64_t tag = 0;
  for (double e : eg)
    for (double l : lg) {
      PartitionCheckReport p = partition_sum_check(c.n, e, l, c.n_mc, g, c.L, mix_seed(c.seed, 100 + tag++));
      violations += p.violations;
      r.table.rows.push_back(row(e, l, kNaN, kNaN, c.n, static_cast<double>(p.violations), kNaN, kNaN, c.n_mc,
                                 {"partition_violations", "nan", "nan", std::to_string(p.in_Sc)}));
      parts.push_back(p.to_json());
    }
  VolumeScSweep vs = volume_sc_sweep(c.n, g, eg, lg, c.n_mc, c.L, c.seed, c.eta);
  for (const auto& p : vs.points)
    r.table.rows.push_back(row(p.eps, p.lambda, kNaN, kNaN, c.n, p.estimate, p.ci_lo, p.ci_hi, p.n_mc,
                               {"volume_Sc", S(p.bound), S(p.ratio), std::to_string(p.hits)}));
  VolumeLemmaReport vl = volume_lemma_check(c.n, kernel_of(c), c.alpha, c.m2, eg, lg, c.eta, c.n_mc, c.L, c.seed, c.workers, c.eta);
  for (const auto& p : vl.points)
    r.table.rows.push_back(row(p.eps, p.lambda, kNaN, kNaN, c.n, p.estimate, p.ci_lo, p.ci_hi, p.n_mc,
                               {"lemma" + std::to_string(p.lemma), S(p.bound), S(p.ratio), std::to_string(p.hits)}));
  r.summary = {{"partition_checks", parts}, {"violations", violations}, {"volume_Sc", vs.to_json()}, {"volume_lemmas", vl.to_json()}};
  r.gate_passed = violations == 0 && vs.domination.dominated && vl.lemma1.dominated && (vl.lemma2_skipped || vl.lemma2.dominated);
}

void fourier_decay_exp(const ExperimentConfig& c, RunResult& r) {
  NonlinearitySpec F = nonlinearity_of(c);
  r.table.extra_columns = {"quantity", "ell", "K", "delta", "predicted"};
  bool ok = true;
  json decays = json::array(), diffs = json::array();
  for (int ell : c.ells) {
    DecayFit d = window_decay(F, ell, c.K_values, c.M_probe, c.probe_family);
    for (std::size_t i = 0; i < d.K.size(); ++i)
      r.table.rows.push_back(row(kNaN, kNaN, kNaN, kNaN, 0, d.norms[i], kNaN, kNaN, 0,
                                 {"window_norm", std::to_string(ell), S(d.K[i]), "0", S(d.predicted)}));
    bool pass = d.slope <= d.predicted + c.decay_tol;
    ok = ok && pass;
    json dj = d.to_json();
    dj["pass"] = pass;
    decays.push_back(dj);
    DifferenceSweep ds = difference_sweep(F, ell, c.deltas, c.K_values, c.omega, c.M_probe, c.probe_family);
    for (std::size_t i = 0; i < ds.norms.size(); ++i)
      r.table.rows.push_back(row(kNaN, kNaN, kNaN, kNaN, 0, ds.norms[i], kNaN, kNaN, 0,
                                 {"difference_norm", std::to_string(ell), S(ds.K[i]), S(ds.delta[i]), S(c.omega)}));
    bool dpass = ds.delta_slope >= c.omega - 0.1;
    ok = ok && dpass;
    json sj = ds.to_json();
    sj["pass"] = dpass;
    diffs.push_back(sj);
  }
  r.summary = {{"decay", decays}, {"difference", diffs}, {"nonlinearity", F.to_json()}};
  r.gate_passed = ok;
}

void lemma_check_exp(const ExperimentConfig& c, RunResult& r) {
  r.table.extra_columns = {"quantity", "point", "bound", "ratio"};
  bool ok = true;
  json lem = json::array();
  for (const auto& name : c.lemmas) {
    LemmaConfig lc;
    lc.kind = parse_lemma(name);
    lc.n = c.n;
    lc.alpha = c.alpha;
    lc.eps = c.epsilon;
    lc.m1 = c.m1;
    lc.m2 = c.m2;
    lc.trig1 = parse_trig(c.trig1);
    lc.trig2 = parse_trig(c.trig2);
    lc.r1 = c.r1;
    lc.r2 = c.r2;
    lc.L0 = c.L0;
    lc.n_configs = c.lemma_configs;
    lc.seed = c.seed;
    RatioReport rep = check_correlation_lemma(lc);
    for (const auto& p : rep.grid)
      r.table.rows.push_back(row(c.epsilon, kNaN, p.theta_x, p.theta_y, c.n, p.ratio, p.ci_lo, p.ci_hi, lc.n_configs,
                                 {"lemma_" + name, "nan", "nan", S(p.ratio)}));
    ok = ok && std::isfinite(rep.max_ratio);
    lem.push_back(rep.to_json());
  }
  json sweeps = json::array();
  if (c.s.size() == 1) {
    RenormKernel k = kernel_of(c);
    auto eg = or_single(c.eps_grid, c.epsilon);
    auto emit = [&](const EpsSweepReport& s) {
      for (std::size_t i = 0; i < s.eps.size(); ++i)
        r.table.rows.push_back(row(s.eps[i], s.lambda, kNaN, kNaN, 1, s.values[i], kNaN, kNaN, 0,
                                   {s.what, S(s.point), S(s.bounds[i]), S(s.ratios[i])}));
      ok = ok && s.domination.dominated && s.slope_ok;
      sweeps.push_back(s.to_json());
    };
    for (double x : c.G_points) emit(sweep_G(x, k, c.alpha, c.m2, eg, c.eta, parse_profile(c.profile)));
    for (double y : c.H_points) emit(sweep_H(y, c.lambda, k, c.alpha, c.m1, eg, c.eta, parse_profile(c.profile)));
  }
  r.summary = {{"lemmas", lem}, {"second_moments", sweeps}};
  r.gate_passed = ok;
}

void model_object_exp(const ExperimentConfig& c, RunResult& r, ModelFamily fam) {
  NonlinearitySpec F = nonlinearity_of(c);
  std::vector<std::string> syms = c.symbols;
  if (syms.empty()) syms = fam == ModelFamily::kpz ? std::vector<std::string>{"0'", "1'", "2'"} : std::vector<std::string>{"0'", "1'", "2'", "3'"};
  r.table.extra_columns = {"symbol", "C_analytic", "C_empirical", "C_se", "oracle_max_diff", "holder"};
  bool ok = true;
  json per = json::array();
  for (double eps : or_single(c.eps_grid, c.epsilon)) {
    ModelFieldSpec fs;
    fs.family = fam;
    fs.epsilon = eps;
    fs.h = c.h_over_eps * eps;
    fs.cutoff = c.model_cutoff;
    ModelField field(fs);
    for (const auto& sn : syms) {
      ModelSymbol sym = parse_symbol(sn);
      ModelObjectSpec an = make_object(fam, sym, F, field, Renorm::analytic);
      ModelObjectSpec em = an;
      double C_se = set_empirical_constant(em, field, std::min<long>(c.n_samples, 400), mix_seed(c.seed, 0xC0), c.workers);
      const ModelObjectSpec& use = c.renorm == "empirical" ? em : an;
      std::vector<double> means(static_cast<std::size_t>(c.n_samples));
      std::vector<double> oracle(means.size(), 0.0);
      const bool poly = F.kind == NonlinearityKind::polynomial;
      parallel_for(means.size(), c.workers, [&](std::size_t i) {
        FieldSample s = field.sample(c.seed, i);
        std::vector<double> v(s.values.size());
        double od = 0.0;
        for (std::size_t j = 0; j < v.size(); ++j) {
          v[j] = eval_object(use, s, j);
          if (poly && i < 4) od = std::max(od, std::fabs(eval_object(an, s, j) - polynomial_object_oracle(an, s, j)));
        }
        means[i] = mean(v);
        oracle[i] = od;
      });
      double m = mean(means), ss = 0.0, od = 0.0;
      for (double x : means) ss += (x - m) * (x - m);
      for (double x : oracle) od = std::max(od, x);
      double se = std::sqrt(ss / static_cast<double>(means.size() - 1) / static_cast<double>(means.size()));
      // Hoelder norm of one realization
      FieldSample s0 = field.sample(c.seed, 0);
      std::vector<double> obj(s0.values.size());
      for (std::size_t j = 0; j < obj.size(); ++j) obj[j] = eval_object(use, s0, j);
      double lmax = std::min(1.0, c.model_cutoff);
      const Lattice& FL = *field.lattice();
      for (std::size_t a = 0; a < FL.extent.size(); ++a) lmax = std::min(lmax, std::pow(FL.extent[a], 1.0 / FL.geometry.s()[a]));
      HolderNormEstimate hn = holder_norm(field, obj, c.holder_alpha, c.holder_levels, 4, lmax);
      bool mean_ok = std::fabs(m) <= 4.0 * se + 1e-12;
      bool c_ok = sym == ModelSymbol::s1 || std::fabs(em.C - an.C) <= 4.0 * C_se + 1e-12;
      bool o_ok = !poly || od <= 1e-8;
      ok = ok && mean_ok && c_ok && o_ok;
      r.table.rows.push_back(row(eps, kNaN, kNaN, kNaN, 1, m, m - 1.96 * se, m + 1.96 * se, c.n_samples,
                                 {sn, S(an.C), S(em.C), S(C_se), poly ? S(od) : "nan", S(hn.value)}));
      per.push_back({{"eps", eps}, {"symbol", sn}, {"object", use.to_json()}, {"mean", m}, {"se", se}, {"mean_ok", mean_ok},
                     {"C_analytic", an.C}, {"C_empirical", em.C}, {"C_se", C_se}, {"C_ok", c_ok},
                     {"oracle_max_diff", poly ? json(od) : json(nullptr)}, {"holder", hn.to_json()},
                     {"psi_var", field.psi_var()}, {"lattice_points", field.lattice()->size()}});
    }
  }
  r.summary = {{"family", family_name(fam)}, {"objects", per}};
  r.gate_passed = ok;
}

RemainderQuery remainder_base(const ExperimentConfig& c) {
  RemainderQuery q;
  q.field.family = parse_family(c.family);
  q.field.cutoff = c.model_cutoff;
  q.nonlinearity = nonlinearity_of(c);
  q.lambda = c.lambda;
  q.n = c.n;
  q.n_samples = c.n_samples;
  q.seed = c.seed;
  q.workers = c.workers;
  return q;
}

void remainder_sweep_exp(const ExperimentConfig& c, RunResult& r) {
  DeltaSweep ds = remainder_sweep(remainder_base(c), or_single(c.eps_grid, c.epsilon), c.nu);
  r.table.extra_columns = {"delta"};
  for (const auto& p : ds.points)
    r.table.rows.push_back(row(p.eps, p.lambda, kNaN, kNaN, p.est.n, p.est.value, p.est.ci_lo, p.est.ci_hi, p.est.n_samples,
                               {S(p.delta)}));
  r.summary = ds.to_json();
  r.gate_passed = ds.points.size() < 2 || ds.slope > 0.0;
}

void mollification_gap_exp(const ExperimentConfig& c, RunResult& r) {
  GapSweep gs = gap_sweep(remainder_base(c), or_single(c.eps_grid, c.epsilon), or_single(c.lambda_grid, c.lambda), c.nu, c.zeta,
                          c.eta);
  r.table.extra_columns = {"delta", "bound", "ratio"};
  for (const auto& p : gs.points)
    r.table.rows.push_back(row(p.eps, p.lambda, kNaN, kNaN, p.est.n, p.est.value, p.est.ci_lo, p.est.ci_hi, p.est.n_samples,
                               {S(p.delta), S(p.bound), S(p.ratio)}));
  r.summary = gs.to_json();
  r.gate_passed = gs.domination.dominated;
}

}  // namespace

RunResult run_experiment(const ExperimentConfig& cfg, const std::string& name) {
  auto v = validate(cfg);
  if (!v.empty()) {
    std::string msg = "invalid config:";
    for (const auto& s : v) msg += "\n  " + s;
    throw ConfigError(msg);
  }
  RunResult r;
  r.experiment = name;
  auto t0 = std::chrono::steady_clock::now();
  if (name == "verify-cov")
    verify_cov(cfg, r);
  else if (name == "isserlis-check")
    isserlis_check(cfg, r);
  else if (name == "kernel-check")
    kernel_check(cfg, r);
  else if (name == "freq-sweep")
    freq_sweep_exp(cfg, r);
  else if (name == "scaling-scan")
    scaling_scan_exp(cfg, r);
  else if (name == "volume-check")
    volume_check(cfg, r);
  else if (name == "fourier-decay")
    fourier_decay_exp(cfg, r);
  else if (name == "lemma-check")
    lemma_check_exp(cfg, r);
  else if (name == "kpz-object")
    model_object_exp(cfg, r, ModelFamily::kpz);
  else if (name == "phi43-object")
    model_object_exp(cfg, r, ModelFamily::phi43);
  else if (name == "remainder-sweep")
    remainder_sweep_exp(cfg, r);
  else if (name == "mollification-gap")
    mollification_gap_exp(cfg, r);
  else
    throw ConfigError("unknown experiment: " + name);
  r.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  r.csv = r.table.render(cfg.seed);
  return r;
}

json write_artifacts(const ExperimentConfig& cfg, const RunResult& r, const std::string& dir) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw ResourceError("cannot create output directory " + dir + ": " + ec.message());
  fs::path csv = fs::path(dir) / (r.experiment + ".csv");
  fs::path man = fs::path(dir) / (r.experiment + ".manifest.json");
  json m = {{"schema", 1},
            {"experiment", r.experiment},
            {"config", cfg.to_json()},
            {"config_hash", config_hash(cfg)},
            {"git_describe", git_describe()},
            {"seed", cfg.seed},
            {"workers", cfg.workers},
            {"wall_time_s", r.wall_seconds},
            {"csv", csv.filename().string()},
            {"csv_sha256", sha256_hex(r.csv)},
            {"gate_passed", r.gate_passed},
            {"result", r.summary}};
  {
    std::ofstream out(csv, std::ios::binary);
    if (!out) throw ResourceError("cannot write " + csv.string());
    out << r.csv;
  }
  {
    std::ofstream out(man);
    if (!out) throw ResourceError("cannot write " + man.string());
    out << m.dump(2) << "\n";
  }
  return m;
}

}  // namespace tchaos
