#pragma once
#include <nlohmann/json.hpp>
#include <string>
#include <vector>

#include "tchaos/config.hpp"

namespace tchaos {

const std::vector<std::string>& experiment_names();

struct CsvRow {
  double eps = 0.0, lambda = 0.0, theta_x = 0.0, theta_y = 0.0;
  int n = 0;
  double estimate = 0.0, ci_lo = 0.0, ci_hi = 0.0;
  long n_samples = 0;
  std::vector<std::string> extra;  // preformatted, one per extra column
};

struct CsvTable {
  std::vector<std::string> extra_columns;
  std::vector<CsvRow> rows;
  // Header plus one line per row, doubles as %.17g, NaN for "not applicable".
  std::string render(std::uint64_t seed) const;
};

std::string fmt_double(double v);

struct RunResult {
  std::string experiment;
  CsvTable table;
  std::string csv;
  nlohmann::json summary;
  bool gate_passed = true;
  double wall_seconds = 0.0;
  int exit_code() const { return gate_passed ? 0 : 2; }
};

// Runs one experiment; throws on operational errors.
RunResult run_experiment(const ExperimentConfig& cfg, const std::string& name);

// Writes <dir>/<name>.csv and <dir>/<name>.manifest.json.
nlohmann::json write_artifacts(const ExperimentConfig& cfg, const RunResult& r, const std::string& dir);

const char* git_describe();

}  // namespace tchaos
