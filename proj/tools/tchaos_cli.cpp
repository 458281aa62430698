#include <CLI11.hpp>
#include <iostream>

#include "tchaos/config.hpp"
#include "tchaos/errors.hpp"
#include "tchaos/runner.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Frequency-independent chaos bounds: experiment runner"};
  std::string config_path, experiment, out_dir;
  std::uint64_t seed = 0;
  unsigned workers = 0;
  bool list = false;
  app.add_option("--config", config_path, "experiment config (YAML)");
  app.add_option("--experiment", experiment, "experiment name (defaults to the config's)");
  auto* seed_opt = app.add_option("--seed", seed, "master seed, overrides the config");
  auto* workers_opt = app.add_option("--workers", workers, "worker threads, overrides the config");
  auto* out_opt = app.add_option("--out", out_dir, "output directory, overrides the config");
  app.add_flag("--list", list, "print experiment names and exit");
  CLI11_PARSE(app, argc, argv);

  if (list) {
    for (const auto& n : tchaos::experiment_names()) std::cout << n << "\n";
    return 0;
  }
  try {
    if (config_path.empty()) throw tchaos::ConfigError("--config is required");
    tchaos::ExperimentConfig cfg = tchaos::load_config(config_path);
    if (*seed_opt) cfg.seed = seed;
    if (*workers_opt) cfg.workers = workers;
    if (*out_opt) cfg.out_dir = out_dir;
    if (experiment.empty()) experiment = cfg.experiment;
    if (experiment.empty()) throw tchaos::ConfigError("no experiment given (--experiment or 'experiment:' in the config)");
    auto violations = tchaos::validate(cfg);
    if (!violations.empty()) {
      std::cerr << "invalid config " << config_path << ":\n";
      for (const auto& v : violations) std::cerr << "  " << v << "\n";
      return 1;
    }
    tchaos::RunResult r = tchaos::run_experiment(cfg, experiment);
    tchaos::write_artifacts(cfg, r, cfg.out_dir);
    std::cout << experiment << ": " << (r.gate_passed ? "gate passed" : "gate FAILED") << " (" << r.table.rows.size()
              << " rows, " << r.wall_seconds << " s) -> " << cfg.out_dir << "\n";
    return r.exit_code();
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
