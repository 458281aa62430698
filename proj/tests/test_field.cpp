#include <doctest.h>

#include <cmath>

#include "tchaos/errors.hpp"
#include "tchaos/field.hpp"

using namespace tchaos;

TEST_SUITE("field") {
  TEST_CASE("target covariance profiles") {
    CovarianceSpec c;
    c.alpha = 0.6;
    c.epsilon = 0.1;
    CHECK(target_covariance(c, 0.0) == doctest::Approx(std::pow(0.1, -0.6)));
    CHECK(target_covariance(c, 0.3) == doctest::Approx(std::pow(0.4, -0.6)));
    c.profile = CovProfile::smooth;
    CHECK(target_covariance(c, 0.0) == doctest::Approx(std::pow(0.1, -0.6)));
    CHECK(parse_profile("smooth") == CovProfile::smooth);
    CHECK_THROWS_AS(parse_profile("gauss"), ConfigError);
  }

  TEST_CASE("sandwich constant") {
    CHECK(sandwich_lambda({1.0, 2.0}, {1.0, 1.0}) == 2.0);
    CHECK(sandwich_lambda({0.5, 1.0}, {1.0, 1.0}) == 2.0);
    CHECK(std::isinf(sandwich_lambda({0.0}, {1.0})));
    auto g = lag_grid(64);
    CHECK(g == std::vector<std::size_t>{0, 1, 2, 4, 8, 16});
  }

  TEST_CASE("embedding reproduces the target at short lags") {
    ScalingGeometry g({1.0});
    CovarianceSpec c;
    c.alpha = 0.6;
    c.epsilon = 0.05;
    Lattice L = field_lattice(g, 0.025, 8.0);
    Spectrum sp = build_spectrum(c, L);
    CHECK(sp.clipped_mass < 0.01);
    CHECK(sp.sigma2 == doctest::Approx(std::pow(c.epsilon, c.alpha) * sp.psi_var));
    auto cv = spectrum_covariance(sp);
    double lam = 1.0;
    for (std::size_t k : lag_grid(L.counts[0]))
      lam = std::max(lam, std::max(cv[k] / target_covariance(c, k * L.step[0]), target_covariance(c, k * L.step[0]) / cv[k]));
    CHECK(lam < 2.0);
  }

  TEST_CASE("samples are deterministic in (seed, index)") {
    ScalingGeometry g({1.0});
    CovarianceSpec c;
    c.epsilon = 0.1;
    Spectrum sp = build_spectrum(c, field_lattice(g, 0.05, 4.0));
    auto a = sample_field(sp, 3, 17), b = sample_field(sp, 3, 17), d = sample_field(sp, 3, 18);
    CHECK(a.values == b.values);
    CHECK(a.values != d.values);
    CHECK(a.x_scale == doctest::Approx(std::pow(0.1, 0.3)));
  }

  TEST_CASE("empirical variance matches the exact one") {
    ScalingGeometry g({1.0});
    CovarianceSpec c;
    c.epsilon = 0.1;
    Spectrum sp = build_spectrum(c, field_lattice(g, 0.05, 4.0));
    // sites within one sample are strongly correlated, so compare per-sample means
    const int n = 2000;
    double acc = 0.0, acc2 = 0.0;
    for (int i = 0; i < n; ++i) {
      auto s = sample_field(sp, 1, i);
      double m = 0.0;
      for (double v : s.values) m += v * v;
      m /= static_cast<double>(s.values.size());
      acc += m;
      acc2 += m * m;
    }
    double mean = acc / n, se = std::sqrt((acc2 / n - mean * mean) / (n - 1));
    CHECK(std::fabs(mean - sp.psi_var) <= 4.0 * se);
  }
}
