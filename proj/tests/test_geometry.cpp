#include <doctest.h>

#include <cmath>

#include "tchaos/errors.hpp"
#include "tchaos/geometry.hpp"

using namespace tchaos;

TEST_SUITE("geometry") {
  TEST_CASE("anisotropic metric") {
    ScalingGeometry g({2.0, 1.0});
    CHECK(g.total() == 3.0);
    CHECK(g.metric({0.25, 0.1}) == doctest::Approx(0.5));
    CHECK(g.metric({0.01, 0.3}) == doctest::Approx(0.3));
    CHECK(g.distance({0.25, 0.0}, {0.0, 0.1}) == doctest::Approx(0.5));
    Point x{0.3, -0.2};
    Point y = g.dilate(x, 0.5);
    CHECK(y[0] == doctest::Approx(0.075));
    CHECK(y[1] == doctest::Approx(-0.1));
    CHECK(g.metric(y) == doctest::Approx(0.5 * g.metric(x)));
  }

  TEST_CASE("bump profile") {
    CHECK(bump_profile({0.0}) == doctest::Approx(1.0));
    CHECK(bump_profile({1.0}) == 0.0);
    CHECK(bump_profile({0.5, 0.5}) == doctest::Approx(std::exp(1.0 - 1.0 / 0.5)));
  }

  TEST_CASE("test function mass is scale free") {
    ScalingGeometry g({1.0});
    auto mass = [&](double lam) {
      TestFunction tf(g, {0.1}, lam);
      const int n = 20000;
      double acc = 0.0, dx = 2.0 * lam / n;
      for (int i = 0; i < n; ++i) acc += tf.eval({0.1 - lam + (i + 0.5) * dx});
      return acc * dx;
    };
    CHECK(mass(0.5) == doctest::Approx(mass(0.05)).epsilon(1e-8));
    TestFunction tf(g, {0.0}, 0.2);
    CHECK(tf.eval({0.2}) == 0.0);
    CHECK(tf.eval({0.0}) == doctest::Approx(tf.prefactor()));
  }

  TEST_CASE("periodic lattice indexing") {
    ScalingGeometry g({2.0, 1.0});
    Lattice L = periodic_lattice(g, 0.1, {8, 16});
    CHECK(L.size() == 128);
    CHECK(L.step[0] == doctest::Approx(0.01));
    CHECK(L.step[1] == doctest::Approx(0.1));
    for (std::size_t f : {std::size_t(0), std::size_t(17), std::size_t(127)}) CHECK(L.flat(L.index(f)) == f);
    Point o = L.point(L.flat(L.origin));
    CHECK(o[0] == doctest::Approx(0.0));
    CHECK(o[1] == doctest::Approx(0.0));
    CHECK(L.cell_volume() == doctest::Approx(0.001));
  }
}
