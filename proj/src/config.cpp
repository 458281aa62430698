#include "tchaos/config.hpp"

#include <openssl/evp.h>
#include <yaml-cpp/yaml.h>

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "tchaos/chaos.hpp"
#include "tchaos/errors.hpp"
#include "tchaos/models.hpp"
#include "tchaos/nonlinearity.hpp"

namespace tchaos {

using json = nlohmann::json;

namespace {

json scalar_to_json(const std::string& s) {
  if (s == "true") return true;
  if (s == "false") return false;
  long long iv = 0;
  auto r = std::from_chars(s.data(), s.data() + s.size(), iv);
  if (r.ec == std::errc() && r.ptr == s.data() + s.size()) return iv;
  char* end = nullptr;
  double dv = std::strtod(s.c_str(), &end);
  if (!s.empty() && end == s.c_str() + s.size()) return dv;
  return s;
}

json yaml_to_json(const YAML::Node& n) {
  switch (n.Type()) {
    case YAML::NodeType::Null:
    case YAML::NodeType::Undefined: return nullptr;
    case YAML::NodeType::Scalar:
      // quoted scalars stay strings
      if (n.Tag() == "!") return n.as<std::string>();
      return scalar_to_json(n.as<std::string>());
    case YAML::NodeType::Sequence: {
      json a = json::array();
      for (const auto& c : n) a.push_back(yaml_to_json(c));
      return a;
    }
    case YAML::NodeType::Map: {
      json o = json::object();
      for (const auto& kv : n) o[kv.first.as<std::string>()] = yaml_to_json(kv.second);
      return o;
    }
  }
  return nullptr;
}

// Reads keys of one section, rejecting unknown ones.
class Section {
 public:
  Section(const json& root, const std::string& name, std::set<std::string> allowed) : name_(name) {
    if (name.empty()) {
      j_ = root;
    } else if (root.contains(name)) {
      j_ = root.at(name);
      if (!j_.is_object()) throw ConfigError("section '" + name + "' must be a map");
    }
    if (j_.is_null()) j_ = json::object();
    for (auto it = j_.begin(); it != j_.end(); ++it)
      if (!allowed.count(it.key())) throw ConfigError("unknown key '" + it.key() + "'" + (name.empty() ? "" : " in '" + name + "'"));
  }

  template <class T>
  void get(const char* key, T& out) const {
    if (!j_.contains(key) || j_.at(key).is_null()) return;
    try {
      out = j_.at(key).get<T>();
    } catch (const json::exception& e) {
      throw ConfigError(std::string("bad value for '") + key + "': " + e.what());
    }
  }
  const json& raw(const char* key) const { return j_.at(key); }
  bool has(const char* key) const { return j_.contains(key) && !j_.at(key).is_null(); }

 private:
  std::string name_;
  json j_;
};

}  // namespace

json ExperimentConfig::to_json() const {
  json th = json::array();
  for (const auto& t : thetas) th.push_back({t.first, t.second});
  return {
      {"experiment", experiment},
      {"seed", seed},
      {"workers", workers},
      {"geometry", {{"s", s}}},
      {"covariance",
       {{"alpha", alpha}, {"epsilon", epsilon}, {"eps_grid", eps_grid}, {"lambda_const", lambda_const}, {"profile", profile},
        {"clip_threshold", clip_threshold}}},
      {"kernel", {{"gamma", gamma}, {"re", re < 0 ? json("auto") : json(re)}, {"cutoff", cutoff}}},
      {"functional", {{"m1", m1}, {"m2", m2}, {"trig1", trig1}, {"trig2", trig2}, {"r1", r1}, {"r2", r2}}},
      {"grids",
       {{"lambda", lambda}, {"lambda_grid", lambda_grid}, {"theta_values", theta_values}, {"theta_base", theta_base}, {"thetas", th}}},
      {"n", n},
      {"n_samples", n_samples},
      {"L0", L0},
      {"eta", eta},
      {"lattice", {{"h_over_eps", h_over_eps}, {"min_period", min_period}, {"points", points}, {"diagonal_policy", diagonal_policy}}},
      {"monte_carlo",
       {{"n_mc", n_mc}, {"L", L}, {"kernel_samples", kernel_samples}, {"G_points", G_points}, {"H_points", H_points},
        {"lemmas", lemmas}, {"lemma_configs", lemma_configs}}},
      {"nonlinearity", {{"kind", nl_kind}, {"beta", beta}, {"coeffs", coeffs}}},
      {"fourier",
       {{"ells", ells}, {"K", K_values}, {"deltas", deltas}, {"omega", omega}, {"M_probe", M_probe}, {"probe_family", probe_family}}},
      {"model",
       {{"family", family}, {"symbols", symbols}, {"renorm", renorm}, {"cutoff", model_cutoff}, {"nu", nu}, {"zeta", zeta},
        {"holder_alpha", holder_alpha}, {"holder_levels", holder_levels}}},
      {"gates", {{"freq_ratio_max", freq_ratio_max}, {"eps_slope_min", eps_slope_min}, {"decay_tol", decay_tol}}},
      {"output", {{"dir", out_dir}}},
  };
}

ExperimentConfig config_from_json(const json& root) {
  if (!root.is_object()) throw ConfigError("config root must be a map");
  ExperimentConfig c;
  Section top(root, "",
              {"experiment", "seed", "workers", "geometry", "covariance", "kernel", "functional", "grids", "n", "n_samples", "L0",
               "eta", "lattice", "monte_carlo", "nonlinearity", "fourier", "model", "gates", "output"});
  top.get("experiment", c.experiment);
  top.get("seed", c.seed);
  top.get("workers", c.workers);
  top.get("n", c.n);
  top.get("n_samples", c.n_samples);
  top.get("L0", c.L0);
  top.get("eta", c.eta);

  Section geo(root, "geometry", {"s"});
  geo.get("s", c.s);

  Section cov(root, "covariance", {"alpha", "epsilon", "eps_grid", "lambda_const", "profile", "clip_threshold"});
  cov.get("alpha", c.alpha);
  cov.get("epsilon", c.epsilon);
  cov.get("eps_grid", c.eps_grid);
  cov.get("lambda_const", c.lambda_const);
  cov.get("profile", c.profile);
  cov.get("clip_threshold", c.clip_threshold);

  Section ker(root, "kernel", {"gamma", "re", "cutoff"});
  ker.get("gamma", c.gamma);
  ker.get("cutoff", c.cutoff);
  if (ker.has("re")) {
    const json& r = ker.raw("re");
    if (r.is_string() && r.get<std::string>() == "auto")
      c.re = -1;
    else if (r.is_number_integer())
      c.re = r.get<int>();
    else
      throw ConfigError("kernel.re must be 'auto' or an integer");
  }

  Section fun(root, "functional", {"m1", "m2", "trig1", "trig2", "r1", "r2"});
  fun.get("m1", c.m1);
  fun.get("m2", c.m2);
  fun.get("trig1", c.trig1);
  fun.get("trig2", c.trig2);
  fun.get("r1", c.r1);
  fun.get("r2", c.r2);

  Section gr(root, "grids", {"lambda", "lambda_grid", "theta_values", "theta_base", "thetas"});
  gr.get("lambda", c.lambda);
  gr.get("lambda_grid", c.lambda_grid);
  gr.get("theta_values", c.theta_values);
  gr.get("theta_base", c.theta_base);
  if (gr.has("thetas")) {
    std::vector<std::vector<double>> t;
    gr.get("thetas", t);
    for (const auto& p : t) {
      if (p.size() != 2) throw ConfigError("grids.thetas entries must be pairs");
      c.thetas.emplace_back(p[0], p[1]);
    }
  }

  Section lat(root, "lattice", {"h_over_eps", "min_period", "points", "diagonal_policy"});
  lat.get("h_over_eps", c.h_over_eps);
  lat.get("min_period", c.min_period);
  lat.get("points", c.points);
  lat.get("diagonal_policy", c.diagonal_policy);

  Section mc(root, "monte_carlo", {"n_mc", "L", "kernel_samples", "G_points", "H_points", "lemmas", "lemma_configs"});
  mc.get("n_mc", c.n_mc);
  mc.get("L", c.L);
  mc.get("kernel_samples", c.kernel_samples);
  mc.get("G_points", c.G_points);
  mc.get("H_points", c.H_points);
  mc.get("lemmas", c.lemmas);
  mc.get("lemma_configs", c.lemma_configs);

  Section nl(root, "nonlinearity", {"kind", "beta", "coeffs"});
  nl.get("kind", c.nl_kind);
  nl.get("beta", c.beta);
  nl.get("coeffs", c.coeffs);

  Section fo(root, "fourier", {"ells", "K", "deltas", "omega", "M_probe", "probe_family"});
  fo.get("ells", c.ells);
  fo.get("K", c.K_values);
  fo.get("deltas", c.deltas);
  fo.get("omega", c.omega);
  fo.get("M_probe", c.M_probe);
  fo.get("probe_family", c.probe_family);

  Section mo(root, "model", {"family", "symbols", "renorm", "cutoff", "nu", "zeta", "holder_alpha", "holder_levels"});
  mo.get("family", c.family);
  mo.get("symbols", c.symbols);
  mo.get("renorm", c.renorm);
  mo.get("cutoff", c.model_cutoff);
  mo.get("nu", c.nu);
  mo.get("zeta", c.zeta);
  mo.get("holder_alpha", c.holder_alpha);
  mo.get("holder_levels", c.holder_levels);

  Section ga(root, "gates", {"freq_ratio_max", "eps_slope_min", "decay_tol"});
  ga.get("freq_ratio_max", c.freq_ratio_max);
  ga.get("eps_slope_min", c.eps_slope_min);
  ga.get("decay_tol", c.decay_tol);

  Section out(root, "output", {"dir"});
  out.get("dir", c.out_dir);
  return c;
}

ExperimentConfig config_from_yaml(const std::string& text) {
  YAML::Node n;
  try {
    n = YAML::Load(text);
  } catch (const YAML::Exception& e) {
    throw ConfigError(std::string("YAML parse error: ") + e.what());
  }
  return config_from_json(yaml_to_json(n));
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return config_from_yaml(ss.str());
}

std::vector<std::string> validate(const ExperimentConfig& c) {
  std::vector<std::string> v;
  auto fmt = [](const char* f, auto... args) {
    char buf[256];
    std::snprintf(buf, sizeof buf, f, args...);
    return std::string(buf);
  };
  double total = 0.0;
  bool s_ok = !c.s.empty();
  for (double x : c.s) {
    if (!(x > 0.0)) s_ok = false;
    total += x;
  }
  if (!s_ok) {
    v.push_back("geometry: every scaling exponent must be positive");
    return v;
  }
  if (!(c.alpha > 0.0)) v.push_back(fmt("alpha > 0 (alpha=%g)", c.alpha));
  if (c.m1 < 1 || c.m2 < 1) v.push_back(fmt("m1, m2 >= 1 (m1=%d, m2=%d)", c.m1, c.m2));
  if (!(c.alpha * c.m1 > 0.0 && c.alpha * c.m1 < total))
    v.push_back(fmt("0 < alpha m1 < |s| (alpha m1=%g, |s|=%g)", c.alpha * c.m1, total));
  if (!(c.alpha * c.m2 > 0.0 && c.alpha * c.m2 < total))
    v.push_back(fmt("0 < alpha m2 < |s| (alpha m2=%g, |s|=%g)", c.alpha * c.m2, total));
  if (c.alpha * (c.m1 + c.m2) > total + 2.0 * c.gamma + 1e-12)
    v.push_back(fmt("alpha (m1+m2) <= |s| + 2 gamma (%g > %g)", c.alpha * (c.m1 + c.m2), total + 2.0 * c.gamma));
  if (!(c.gamma > 0.0 && c.gamma <= 0.5 * total + 1e-12))
    v.push_back(fmt("0 < gamma <= |s|/2 (gamma=%g, |s|/2=%g)", c.gamma, 0.5 * total));
  for (auto [t, m, name] : {std::tuple{c.trig1, c.m1, "trig1/m1"}, std::tuple{c.trig2, c.m2, "trig2/m2"}}) {
    if (t != "sin" && t != "cos") {
      v.push_back(std::string(name) + ": trig must be sin or cos (got " + t + ")");
      continue;
    }
    bool even = m % 2 == 0;
    if ((t == "cos") != even) v.push_back(fmt("%s: parity, cos needs even m and sin odd m (m=%d)", name, m));
  }
  if (c.r1 < 0 || c.r2 < 0 || c.r1 > kMaxThetaDerivative || c.r2 > kMaxThetaDerivative)
    v.push_back(fmt("theta derivative orders in [0,%d] (r1=%d, r2=%d)", kMaxThetaDerivative, c.r1, c.r2));
  if (c.re < -1 || c.re > 2) v.push_back(fmt("kernel.re in {auto,0,1,2} (re=%d)", c.re));
  if (!(c.cutoff > 0.0)) v.push_back(fmt("kernel.cutoff > 0 (cutoff=%g)", c.cutoff));
  if (!(c.epsilon > 0.0 && c.epsilon < 1.0)) v.push_back(fmt("epsilon in (0,1) (epsilon=%g)", c.epsilon));
  for (double e : c.eps_grid)
    if (!(e > 0.0 && e < 1.0)) v.push_back(fmt("eps_grid entries in (0,1) (got %g)", e));
  if (!(c.lambda > 0.0 && c.lambda <= 1.0)) v.push_back(fmt("lambda in (0,1] (lambda=%g)", c.lambda));
  for (double l : c.lambda_grid)
    if (!(l > 0.0 && l <= 1.0)) v.push_back(fmt("lambda_grid entries in (0,1] (got %g)", l));
  if (!(c.lambda_const >= 1.0)) v.push_back(fmt("lambda_const >= 1 (got %g)", c.lambda_const));
  if (c.profile != "power" && c.profile != "smooth") v.push_back("covariance.profile must be power or smooth (got " + c.profile + ")");
  if (c.n < 1) v.push_back(fmt("n >= 1 (n=%d)", c.n));
  if (c.n_samples < kMinMomentSamples) v.push_back(fmt("n_samples >= %ld (n_samples=%ld)", kMinMomentSamples, c.n_samples));
  if (!(c.eta > 0.0)) v.push_back(fmt("eta > 0 (eta=%g)", c.eta));
  if (!(c.L0 > 0.0)) v.push_back(fmt("L0 > 0 (L0=%g)", c.L0));
  if (!(c.h_over_eps > 0.0 && c.h_over_eps <= 0.5)) v.push_back(fmt("h_over_eps in (0, 1/2] so that eps >= 2h (got %g)", c.h_over_eps));
  if (c.diagonal_policy < 0) v.push_back(fmt("diagonal_policy >= 0 (got %d)", c.diagonal_policy));
  if (!(c.beta > 0.0 && c.beta < 1.0)) v.push_back(fmt("nonlinearity.beta in (0,1) (beta=%g)", c.beta));
  try {
    parse_nonlinearity_kind(c.nl_kind);
  } catch (const std::exception&) {
    v.push_back("nonlinearity.kind unknown (" + c.nl_kind + ")");
  }
  if (c.family != "kpz" && c.family != "phi43") v.push_back("model.family must be kpz or phi43 (got " + c.family + ")");
  if (c.renorm != "analytic" && c.renorm != "empirical") v.push_back("model.renorm must be analytic or empirical (got " + c.renorm + ")");
  bool model_exp = c.experiment == "kpz-object" || c.experiment == "phi43-object" || c.experiment == "remainder-sweep" ||
                   c.experiment == "mollification-gap";
  if (model_exp && (c.family == "kpz" || c.family == "phi43")) {
    auto want = model_geometry(parse_family(c.family)).s();
    if (c.s != want) v.push_back("geometry.s must match the model family " + c.family);
  }
  return v;
}

std::string sha256_hex(const std::string& data) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_Digest(data.data(), data.size(), md, &len, EVP_sha256(), nullptr);
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned i = 0; i < len; ++i) {
    out += hex[md[i] >> 4];
    out += hex[md[i] & 15];
  }
  return out;
}

std::string config_hash(const ExperimentConfig& cfg) { return sha256_hex(cfg.to_json().dump()); }

}  // namespace tchaos
