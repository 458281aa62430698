#include <doctest.h>

#include <cmath>

#include "tchaos/nonlinearity.hpp"
#include "tchaos/quadrature.hpp"

using namespace tchaos;

TEST_SUITE("nonlinearity") {
  TEST_CASE("power nonlinearity and its derivatives") {
    auto F = make_nonlinearity(NonlinearityKind::power_even, 0.5);
    CHECK(F.k == 2);
    CHECK(F(2.0) == doctest::Approx(std::pow(2.0, 2.5)));
    CHECK(F(-2.0, 1) == doctest::Approx(-2.5 * std::pow(2.0, 1.5)));
    CHECK(F(-2.0, 2) == doctest::Approx(2.5 * 1.5 * std::pow(2.0, 0.5)));
    // fitted against 1+|u| on a finite range, so it overshoots slightly
    CHECK(F.M >= 2.5);
    CHECK(F.M < 3.0);
  }

  TEST_CASE("coupling constants against Gauss-Hermite") {
    auto P = make_nonlinearity(NonlinearityKind::polynomial, 0.5, {0, 0, 0, 1});
    CHECK(coupling_constant(P, 0.7, 3) == doctest::Approx(1.0));
    CHECK(coupling_constant(P, 0.7, 1) == doctest::Approx(3.0 * 0.7));
    auto F = make_nonlinearity(NonlinearityKind::power_even, 0.5);
    // E F''(Z)/2 with Z ~ N(0, s2): 1.875 E|Z|^{1/2}
    const double s2 = 1.3;
    double EabsZ = std::pow(2.0 * s2, 0.25) * std::tgamma(0.75) / std::sqrt(M_PI);
    CHECK(coupling_constant(F, s2, 2) == doctest::Approx(1.875 * EabsZ).epsilon(1e-8));
  }

  TEST_CASE("mollifier") {
    const auto& gl = gauss_legendre_cached(200);
    double m = 0.0;
    for (std::size_t i = 0; i < gl.nodes.size(); ++i) m += gl.weights[i] * mollifier(gl.nodes[i]);
    CHECK(m == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(mollifier(1.0) == 0.0);
    CHECK(mollifier_hat(0.0) == doctest::Approx(1.0));
    for (double w : {1e-4, 1e-2, 0.5, 3.0, 20.0}) CHECK(mollifier_hat_complement(w) == doctest::Approx(1.0 - mollifier_hat(w)).epsilon(1e-6));
    CHECK(mollifier_hat_complement(1e-6) > 0.0);
  }

  TEST_CASE("mollification converges and the table agrees with quadrature") {
    auto F = make_nonlinearity(NonlinearityKind::power_even, 0.5);
    auto Fd = mollify(F, 0.05, 4.0);
    for (double u : {-3.0, -0.02, 0.0, 0.7, 2.5})
      for (int ell : {0, 1, 2}) CHECK(Fd(u, ell) == doctest::Approx(mollified_direct(F, u, ell, 0.05)).epsilon(1e-6));
    CHECK(std::fabs(Fd(1.0, 1) - F(1.0, 1)) < 0.01);
    CHECK(Fd(0.0, 2) > 0.0);  // F'' = 3.75|u|^{1/2} is smoothed at 0
  }

  TEST_CASE("Hoelder quotient is finite") {
    auto F = make_nonlinearity(NonlinearityKind::power_even, 0.5);
    double q = holder_quotient(F, 8.0, 1e-4);
    CHECK(std::isfinite(q));
    CHECK(q > 0.0);
  }

  TEST_CASE("window norms decay") {
    auto F = make_nonlinearity(NonlinearityKind::power_even, 0.5);
    WindowNormQuery q;
    q.ell = {0};
    q.K = {4.0};
    double a = window_norm(F, q);
    q.K = {32.0};
    double b = window_norm(F, q);
    CHECK(b < a);
    auto p = probe_pairing(F, 0, 4.0, 0, 4, 0.0, true);
    CHECK(p.re == 0.0);
    CHECK(p.im == 0.0);
  }
}
