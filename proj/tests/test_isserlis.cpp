#include <doctest.h>

#include <cmath>

#include "tchaos/errors.hpp"
#include "tchaos/isserlis.hpp"

using namespace tchaos;

TEST_SUITE("isserlis") {
  Eigen::MatrixXd cov4() {
    Eigen::MatrixXd c(4, 4);
    c << 1.0, 0.3, 0.2, 0.1, 0.3, 1.5, 0.4, 0.25, 0.2, 0.4, 0.9, 0.35, 0.1, 0.25, 0.35, 1.2;
    return c;
  }

  TEST_CASE("small moments in closed form") {
    Eigen::MatrixXd c = cov4();
    CHECK(wick_moment({2}, c.topLeftCorner(1, 1)) == 0.0);
    CHECK(wick_moment({1, 1}, c.topLeftCorner(2, 2)) == doctest::Approx(0.3));
    CHECK(wick_moment({2, 2}, c.topLeftCorner(2, 2)) == doctest::Approx(2 * 0.09));
    CHECK(wick_moment({1, 1, 1, 1}, c) == doctest::Approx(0.3 * 0.35 + 0.2 * 0.25 + 0.1 * 0.4));
    CHECK(wick_moment({1, 1, 2}, c.topLeftCorner(3, 3)) == doctest::Approx(2 * 0.2 * 0.4));
    CHECK(wick_moment({3, 1}, c.topLeftCorner(2, 2)) == 0.0);
  }

  TEST_CASE("D-matrix enumeration") {
    CHECK(enumerate_dmatrices({1, 1, 1, 1}).size() == 3);
    CHECK(enumerate_dmatrices({2, 2}).size() == 1);
    CHECK(enumerate_dmatrices({1, 2}).empty());
    DMatrix D(3);
    D.set(0, 1, 1);
    D.set(1, 2, 2);
    CHECK(D.at(1, 0) == 1);
    CHECK(D.row_sums() == std::vector<int>{1, 3, 2});
    CHECK(dmatrix_multiplicity(D) == doctest::Approx(1.0 * 6.0 * 2.0 / 2.0));
  }

  TEST_CASE("tilted moment at t = 0 is the plain moment") {
    Eigen::MatrixXd c = cov4().topLeftCorner(3, 3);
    auto z = wick_moment_tilted({1, 1, 2}, {0.0, 0.0, 0.0}, c);
    CHECK(z.real() == doctest::Approx(wick_moment({1, 1, 2}, c)));
    CHECK(std::fabs(z.imag()) < 1e-14);
  }

  TEST_CASE("reduction into D*") {
    int checked = 0;
    for_each_dmatrix({2, 1, 1}, [&](const DMatrix& D) {
      if (!in_class_D(D, 1, 1)) return;
      auto r = reduce_to_dstar(D, 0.05, 0.6, 1, 1);
      CHECK(in_class_Dstar(r.dstar, 1, 1));
      CHECK(r.factor == doctest::Approx(std::pow(0.05, -r.penalty)));
      ++checked;
    });
    CHECK(checked > 0);
  }

  TEST_CASE("PSD square root") {
    Eigen::MatrixXd c = cov4();
    Eigen::MatrixXd r = psd_sqrt(c);
    CHECK((r * r - c).norm() < 1e-12);
    Eigen::MatrixXd bad = Eigen::MatrixXd::Identity(2, 2);
    bad(1, 1) = -1.0;
    CHECK_THROWS(psd_sqrt(bad));
  }

  TEST_CASE("trig product moment of independent factors factorizes") {
    Eigen::MatrixXd c = Eigen::MatrixXd::Identity(2, 2);
    auto sc = ChaosTruncSpec::make(Trig::cos, 0);
    double m = trig_product_moment({sc, sc}, {1.0, 2.0}, {0, 0}, c);
    CHECK(m == doctest::Approx(std::exp(-0.5) * std::exp(-2.0)));
  }
}
