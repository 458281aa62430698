#include <doctest.h>

#include <cmath>

#include "tchaos/errors.hpp"
#include "tchaos/experiments.hpp"

using namespace tchaos;

TEST_SUITE("experiments") {
  TEST_CASE("moment norm") {
    std::vector<double> c(300, -2.0);
    auto m = moment_norm(c, 2, 1);
    CHECK(m.value == doctest::Approx(2.0));
    CHECK(m.ci_lo <= m.value);
    CHECK(m.ci_hi >= m.value);
    std::vector<double> v(400);
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = (i % 2 ? 1.0 : -1.0) * (i % 3);
    double m4 = 0.0;
    for (double x : v) m4 += std::pow(x, 4);
    CHECK(moment_norm(v, 2, 1).value == doctest::Approx(std::pow(m4 / v.size(), 0.25)));
    CHECK_THROWS_AS(moment_norm(std::vector<double>(10, 1.0), 1), PreconditionError);
    CHECK(moment_norm(std::vector<double>(200, 0.0), 1).value == 0.0);
  }

  TEST_CASE("mix_seed separates tags") {
    CHECK(mix_seed(1, 2) != mix_seed(1, 3));
    CHECK(mix_seed(1, 2) != mix_seed(2, 2));
    CHECK(mix_seed(5, 9) == mix_seed(5, 9));
  }

  TEST_CASE("domination gate") {
    std::vector<double> e, l, flat, grow, shrink;
    for (double ev : {0.01, 0.02, 0.04})
      for (double lv : {0.1, 0.2, 0.4}) {
        e.push_back(ev);
        l.push_back(lv);
        flat.push_back(3.0);
        grow.push_back(std::pow(ev, -0.5));
        shrink.push_back(std::pow(ev, 0.5) * std::pow(lv, 0.2));
      }
    CHECK(domination_gate(e, l, flat, 0.1).dominated);
    CHECK(domination_gate(e, l, shrink, 0.1).dominated);
    auto g = domination_gate(e, l, grow, 0.1);
    CHECK_FALSE(g.dominated);
    CHECK(g.eps_slope == doctest::Approx(-0.5));
    std::vector<double> bad = flat;
    bad[3] = NAN;
    CHECK_FALSE(domination_gate(e, l, bad, 0.1).finite);
  }

  TEST_CASE("normalized covariance") {
    CovarianceSpec c;
    c.alpha = 0.6;
    c.epsilon = 0.05;
    CHECK(normalized_covariance(c, 0.0) == doctest::Approx(1.0));
    CHECK(normalized_covariance(c, 0.05) == doctest::Approx(std::pow(0.5, 0.6)));
  }

  TEST_CASE("G with a vanishing kernel window") {
    ScalingGeometry g({1.0});
    RenormKernel k(g, 0.4, 1, 1.0);
    CovarianceSpec c;
    c.epsilon = 0.01;
    auto q = second_moment_G(0.25, k, 1, c);
    CHECK(q.value > 0.0);
    CHECK(q.rel_diff < 0.1);
    CHECK(bound_G(0.25, 0.01, 0.4, 0.6, 1, 0.1) == doctest::Approx(std::pow(0.01, 0.3) * std::pow(0.25, 0.0)));
  }

  TEST_CASE("frequency sweep on a small field") {
    OperatorSetup s;
    s.cov.alpha = 0.6;
    s.cov.epsilon = 0.1;
    s.lambda = 0.3;
    s.min_period = 6.0;
    s.n_samples = 200;
    auto r = freq_sweep(s, {{1.0, 1.0}, {10.0, 1.0}, {0.0, 1.0}});
    REQUIRE(r.rows.size() == 3);
    CHECK(r.rows[2].est.value == 0.0);
    CHECK(r.rows[0].est.value > 0.0);
  }
}
