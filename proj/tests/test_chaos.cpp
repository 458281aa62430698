#include <doctest.h>

#include <cmath>

#include "tchaos/chaos.hpp"
#include "tchaos/errors.hpp"
#include "tchaos/rng.hpp"

using namespace tchaos;

TEST_SUITE("chaos") {
  TEST_CASE("Hermite polynomials") {
    CHECK(hermite_prob(0, 0.7) == 1.0);
    CHECK(hermite_prob(3, 2.0) == doctest::Approx(8.0 - 6.0));
    CHECK(hermite_prob(4, 1.0) == doctest::Approx(1.0 - 6.0 + 3.0));
    CHECK(wick_power(1.5, 2, 2.0) == doctest::Approx(2.25 - 2.0));
    CHECK(wick_power(1.5, 3, 2.0) == doctest::Approx(1.5 * 1.5 * 1.5 - 3.0 * 2.0 * 1.5));
  }

  TEST_CASE("trig chaos coefficients in closed form") {
    // sin(theta Z) = sum over odd k of (-1)^{(k-1)/2} theta^k e^{-theta^2 s/2}/k! Z^{<>k}
    const double th = 1.7, s2 = 0.8, damp = std::exp(-0.5 * th * th * s2);
    CHECK(trig_chaos_coeff(Trig::sin, 1, th, s2) == doctest::Approx(th * damp));
    CHECK(trig_chaos_coeff(Trig::sin, 3, th, s2) == doctest::Approx(-th * th * th * damp / 6.0));
    CHECK(trig_chaos_coeff(Trig::sin, 2, th, s2) == 0.0);
    CHECK(trig_chaos_coeff(Trig::cos, 0, th, s2) == doctest::Approx(damp));
    CHECK(trig_chaos_coeff(Trig::cos, 2, th, s2) == doctest::Approx(-th * th * damp / 2.0));
    // huge theta: coefficient underflows gracefully through the log form
    LogCoeff lc = trig_chaos_coeff_log(Trig::sin, 5, 1e3, 1.0);
    CHECK(lc.sign != 0);
    CHECK(lc.log_mag < -4e5);
  }

  TEST_CASE("theta derivative of a coefficient") {
    const double th = 0.9, s2 = 1.1, h = 1e-5;
    double fd = (trig_chaos_coeff(Trig::cos, 2, th + h, s2) - trig_chaos_coeff(Trig::cos, 2, th - h, s2)) / (2 * h);
    CHECK(coeff_theta_derivative(Trig::cos, 2, th, s2, 1) == doctest::Approx(fd).epsilon(1e-7));
  }

  TEST_CASE("parity rule of the truncation") {
    CHECK_THROWS_AS(ChaosTruncSpec::make(Trig::sin, 2), PreconditionError);
    CHECK_THROWS_AS(ChaosTruncSpec::make(Trig::cos, 1), PreconditionError);
    CHECK_NOTHROW(ChaosTruncSpec::make(Trig::cos, 0));
    CHECK_NOTHROW(ChaosTruncSpec::make(Trig::sin, 3));
  }

  TEST_CASE("truncation removes the low chaos") {
    auto spec = ChaosTruncSpec::make(Trig::cos, 2);
    const double th = 2.0, s2 = 1.0;
    // remove c0 only (cos has no first chaos)
    double x = 0.4;
    CHECK(truncated_trig(x, th, spec, s2) == doctest::Approx(std::cos(th * x) - std::exp(-0.5 * th * th * s2)));
    TruncTrigFactor f(spec, th, 0, s2);
    CHECK(f(x) == doctest::Approx(truncated_trig(x, th, spec, s2)));
    TruncTrigFactor z(ChaosTruncSpec::make(Trig::sin, 1), 0.0, 0, s2);
    CHECK(z.vanishes());
  }

  TEST_CASE("Wick expansion of a polynomial") {
    // u^3 = Z^{<>3} + 3 s Z
    auto b = wick_expand_polynomial({0, 0, 0, 1}, 2.0);
    REQUIRE(b.size() >= 4);
    CHECK(b[0] == doctest::Approx(0.0));
    CHECK(b[1] == doctest::Approx(6.0));
    CHECK(b[2] == doctest::Approx(0.0));
    CHECK(b[3] == doctest::Approx(1.0));
    auto c = wick_expand_polynomial({1, 0, 1}, 0.5);
    CHECK(c[0] == doctest::Approx(1.5));
    CHECK(c[2] == doctest::Approx(1.0));
  }
}
