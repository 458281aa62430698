#include <doctest.h>

#include <cmath>

#include "tchaos/kernel.hpp"

using namespace tchaos;

TEST_SUITE("kernel") {
  TEST_CASE("r_e formula") {
    CHECK(compute_re(2.0, 1.0, 3) == 1);
    CHECK(compute_re(0.4, 0.6, 1) == 1);
    CHECK(compute_re(1.0, 1.0, 2) == 0);
    CHECK(compute_re(0.2, 0.6, 1) == 0);
    CHECK(compute_re(0.3, 0.6, 1) == 0);
  }

  TEST_CASE("cutoff") {
    CHECK(cutoff_chi(0.0) == 1.0);
    CHECK(cutoff_chi(0.5) == 1.0);
    CHECK(cutoff_chi(1.0) == 0.0);
    double v = cutoff_chi(0.75);
    CHECK(v > 0.0);
    CHECK(v < 1.0);
  }

  TEST_CASE("homogeneity and renormalization") {
    ScalingGeometry g({1.0});
    RenormKernel k0(g, 0.4, 0), k1(g, 0.4, 1);
    CHECK(k0.K0_1d(0.1) == doctest::Approx(std::pow(0.1, -0.6)));
    CHECK(k0.K0_1d(0.2) / k0.K0_1d(0.1) == doctest::Approx(std::pow(2.0, -0.6)));
    CHECK(std::isinf(k0.K0_1d(0.0)));
    CHECK(k0.K_1d(0.1, 0.3) == doctest::Approx(k0.K0_1d(-0.2)));
    CHECK(k1.K_1d(0.0, 0.3) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(k1.K_1d(0.1, 0.3) == doctest::Approx(k0.K0_1d(-0.2) - k0.K0_1d(-0.3)));
    CHECK(eval_K({0.1}, {0.3}, k1) == doctest::Approx(k1.K_1d(0.1, 0.3)));
  }

  TEST_CASE("anisotropic kernel") {
    ScalingGeometry g({2.0, 1.0});
    RenormKernel k(g, 1.0, 0, 1.0);
    CHECK(k.singularity() == 2.0);
    CHECK(eval_K0({0.04, 0.1}, k) == doctest::Approx(std::pow(0.2, -2.0)));
  }

  TEST_CASE("Taylor cancellation slope") {
    ScalingGeometry g({1.0});
    for (int re : {0, 1}) {
      RenormKernel k(g, 0.4, re);
      CHECK(taylor_slope(k, {0.5}, {1.0}).slope >= re - 0.05);
    }
  }

  TEST_CASE("region bounds are finite") {
    ScalingGeometry g({1.0});
    RenormKernel k(g, 0.4, 1);
    auto r = check_region_bounds(k, 2000, 3);
    REQUIRE(!r.regions.empty());
    for (const auto& reg : r.regions) CHECK(std::isfinite(reg.max_ratio));
  }
}
