#include <doctest.h>

#include <cmath>

#include "tchaos/clustering.hpp"

using namespace tchaos;

TEST_SUITE("clustering") {
  const ScalingGeometry g1({1.0});

  TEST_CASE("classes and singletons") {
    const double L = 0.1;
    auto p = build_clusters({{0.0}, {0.4 * L}, {10 * L}}, L, g1);
    REQUIRE(p.classes.size() == 2);
    CHECK(p.classes[0] == std::vector<std::size_t>{0, 1});
    CHECK(p.singletons.size() == 1);
    CHECK(build_clusters({{0.3}, {0.3}, {0.3}}, L, g1).classes.size() == 1);
    auto chain = build_clusters({{0.0}, {0.9 * L}, {1.8 * L}}, L, g1);
    CHECK(chain.classes.size() == 1);
    CHECK(chain.classes[0].size() == 3);
    auto rev = build_clusters({{10 * L}, {0.4 * L}, {0.0}}, L, g1);
    CHECK(rev.classes.size() == 2);
  }

  TEST_CASE("S_2n membership") {
    const double L = 0.1;
    CHECK(in_S2n({{0.0}, {2 * L}}, L, g1));
    CHECK_FALSE(in_S2n({{0.0}, {0.5 * L}}, L, g1));
    CHECK_FALSE(in_S2n({{0.0}, {0.05}, {1.0}, {1.05}}, L, g1));
    CHECK(in_Cm({{0.0}, {0.09}, {0.18}}, L, g1));
    CHECK_FALSE(in_Cm({{0.0}, {0.5}}, L, g1));
  }

  TEST_CASE("partitions with blocks of size at least two") {
    CHECK(set_partitions(2).size() == 1);
    CHECK(set_partitions(4).size() == 4);
    CHECK(set_partitions(6).size() == 41);
    CHECK(set_partitions(3, 1).size() == 5);
  }

  TEST_CASE("partition identity holds") {
    auto r = partition_sum_check(2, 0.05, 0.1, 20000, g1, 1.0, 3);
    CHECK(r.violations == 0);
    CHECK(r.in_Sc > 0);
  }

  TEST_CASE("two-point volume against the exact area") {
    const double eps = 0.05, lam = 0.1;
    auto v = volume_Sc(1, eps, lam, g1, 200000, 1.0, 5);
    double exact = volume_Sc_two_point_exact(eps, lam);
    CHECK(v.ci_lo <= exact);
    CHECK(v.ci_hi >= exact);
    // eps >= 4 lambda: the whole box
    auto full = volume_Sc(1, 1.0, 0.1, g1, 20000, 1.0, 5);
    CHECK(full.estimate == doctest::Approx(0.16));
  }

  TEST_CASE("Wilson interval") {
    auto w = wilson_interval(50, 100);
    CHECK(w.first < 0.5);
    CHECK(w.second > 0.5);
    CHECK(wilson_interval(0, 100).first == 0.0);
  }
}
