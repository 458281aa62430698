#include <doctest.h>

#include <algorithm>
#include <filesystem>

#include "tchaos/config.hpp"
#include "tchaos/errors.hpp"
#include "tchaos/runner.hpp"

using namespace tchaos;

namespace {
bool mentions(const std::vector<std::string>& v, const std::string& s) {
  return std::any_of(v.begin(), v.end(), [&](const std::string& x) { return x.find(s) != std::string::npos; });
}
}  // namespace

TEST_SUITE("config") {
  TEST_CASE("constraint examples") {
    ExperimentConfig c;
    c.s = {1.0};
    c.alpha = 0.6;
    c.m1 = c.m2 = 1;
    c.gamma = 0.4;
    CHECK(validate(c).empty());

    ExperimentConfig p;
    p.s = {2.0, 1.0, 1.0, 1.0};
    p.alpha = 1.0;
    p.m1 = 2;
    p.trig1 = "cos";
    p.m2 = 3;
    p.gamma = 2.0;
    CHECK(validate(p).empty());

    c.gamma = 0.6;
    auto v = validate(c);
    CHECK(mentions(v, "|s|/2"));
  }

  TEST_CASE("parity violation is reported") {
    ExperimentConfig c;
    c.m1 = 2;
    c.trig1 = "sin";
    CHECK_FALSE(validate(c).empty());
  }

  TEST_CASE("yaml parsing and json round trip") {
    auto c = config_from_yaml(
        "experiment: freq-sweep\nseed: 9\ncovariance: {alpha: 0.5, epsilon: 0.1}\nkernel: {gamma: 0.3, re: 1}\n"
        "grids: {thetas: [[1, 2], [3, 4]]}\n");
    CHECK(c.seed == 9);
    CHECK(c.alpha == 0.5);
    CHECK(c.re == 1);
    REQUIRE(c.thetas.size() == 2);
    CHECK(c.thetas[1].second == 4.0);
    auto d = config_from_json(c.to_json());
    CHECK(d.to_json() == c.to_json());
    CHECK(config_hash(c) == config_hash(d));
    CHECK_THROWS_AS(config_from_yaml("covariance: {alfa: 0.5}\n"), ConfigError);
    CHECK_THROWS_AS(config_from_yaml("kernel: {re: maybe}\n"), ConfigError);
  }

  TEST_CASE("sha256") {
    CHECK(sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  }

  TEST_CASE("every checked-in config validates") {
    int n = 0;
    for (const auto& e : std::filesystem::directory_iterator(std::filesystem::path(TCHAOS_SOURCE_DIR) / "configs")) {
      if (e.path().extension() != ".yaml") continue;
      auto c = load_config(e.path().string());
      INFO(e.path().string());
      CHECK(validate(c).empty());
      CHECK(std::find(experiment_names().begin(), experiment_names().end(), c.experiment) != experiment_names().end());
      ++n;
    }
    CHECK(n >= 12);
  }

  TEST_CASE("unknown experiment") {
    ExperimentConfig c;
    CHECK_THROWS_AS(run_experiment(c, "nope"), ConfigError);
  }
}
