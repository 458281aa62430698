#pragma once
#include <cstdint>
#include <nlohmann/json.hpp>
#include <string>
#include <utility>
#include <vector>

#include "tchaos/field.hpp"

namespace tchaos {

struct ExperimentConfig {
  std::string experiment;  // default experiment when --experiment is absent
  std::uint64_t seed = 1;
  unsigned workers = 1;
  std::vector<double> s{1.0};

  // covariance
  double alpha = 0.6;
  double epsilon = 0.05;
  std::vector<double> eps_grid;
  double lambda_const = 2.0;
  std::string profile = "power";
  double clip_threshold = 0.01;

  // kernel
  double gamma = 0.4;
  int re = -1;  // -1 = derived
  double cutoff = 1.0;

  // functional
  int m1 = 1, m2 = 1;
  std::string trig1 = "sin", trig2 = "sin";
  int r1 = 0, r2 = 0;

  // grids
  double lambda = 0.2;
  std::vector<double> lambda_grid;
  std::vector<double> theta_values{1.0, 10.0, 100.0, 1000.0};
  double theta_base = 1.0;
  std::vector<std::pair<double, double>> thetas;  // explicit Theta list (scaling-scan)

  int n = 2;
  long n_samples = 4000;
  double L0 = 8.0;
  double eta = 0.1;

  // lattice
  double h_over_eps = 0.5;
  double min_period = 8.0;
  std::size_t points = 0;  // fixed point count for verify-cov, 0 = from min_period
  int diagonal_policy = 1;

  // deterministic / Monte Carlo budgets
  long n_mc = 100000;
  double L = 1.0;
  long kernel_samples = 10000;
  std::vector<double> G_points{0.25, 0.5};
  std::vector<double> H_points{0.5, 0.05};
  std::vector<std::string> lemmas{"comparable", "singleton", "fixed"};
  int lemma_configs = 50;

  // nonlinearity
  std::string nl_kind = "power_even";
  double beta = 0.5;
  std::vector<double> coeffs;
  std::vector<int> ells{0, 1, 2};
  std::vector<double> K_values{1, 2, 4, 8, 16, 32, 64};
  std::vector<double> deltas{0.4, 0.2, 0.1, 0.05};
  double omega = 0.25;
  int M_probe = 4;
  int probe_family = 1;

  // models
  std::string family = "kpz";
  std::vector<std::string> symbols;
  std::string renorm = "analytic";
  double model_cutoff = 0.5;
  double nu = 0.5;
  double zeta = 0.05;
  double holder_alpha = -1.1;
  int holder_levels = 4;

  // gates
  double freq_ratio_max = 3.0;
  double eps_slope_min = 0.45;
  double decay_tol = 0.2;

  std::string out_dir = "out";

  nlohmann::json to_json() const;
};

ExperimentConfig config_from_yaml(const std::string& text);
ExperimentConfig load_config(const std::string& path);
// JSON is a YAML subset, so manifests' embedded configs load through the same path.
ExperimentConfig config_from_json(const nlohmann::json& j);

// Empty iff every constraint holds; each entry names the constraint and the values.
std::vector<std::string> validate(const ExperimentConfig& cfg);

// Lowercase hex SHA-256.
std::string sha256_hex(const std::string& data);
std::string config_hash(const ExperimentConfig& cfg);

}  // namespace tchaos
