#include <doctest.h>

#include <cmath>
#include <vector>

#include "tchaos/stats.hpp"

using namespace tchaos;

TEST_SUITE("stats") {
  TEST_CASE("pairwise sum is exact on integers and order fixed") {
    std::vector<double> v(1000);
    for (int i = 0; i < 1000; ++i) v[i] = i + 1;
    CHECK(pairwise_sum(v) == 500500.0);
    CHECK(mean(v) == 500.5);
  }

  TEST_CASE("least squares recovers an exact plane") {
    std::vector<std::vector<double>> X;
    std::vector<double> y;
    for (int i = 0; i < 5; ++i)
      for (int j = 0; j < 4; ++j) {
        X.push_back({double(i), double(j * j)});
        y.push_back(1.5 - 2.0 * i + 0.25 * j * j);
      }
    LinearFit f = ols(X, y);
    CHECK(f.coef[0] == doctest::Approx(1.5));
    CHECK(f.coef[1] == doctest::Approx(-2.0));
    CHECK(f.coef[2] == doctest::Approx(0.25));
    CHECK(f.residual_sd < 1e-10);
  }

  TEST_CASE("loglog slope of a power law") {
    std::vector<double> x{0.01, 0.02, 0.04, 0.08}, y;
    for (double v : x) y.push_back(3.0 * std::pow(v, 0.7));
    CHECK(loglog_fit(x, y).coef[1] == doctest::Approx(0.7));
  }

  TEST_CASE("bootstrap is deterministic in the seed") {
    std::vector<std::size_t> a, b, c;
    bootstrap_indices(5, 2, 50, a);
    bootstrap_indices(5, 2, 50, b);
    bootstrap_indices(5, 3, 50, c);
    CHECK(a == b);
    CHECK(a != c);
    std::vector<double> v(200);
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = double(i % 17);
    auto stat = [&](const std::vector<std::size_t>& idx) {
      double s = 0;
      for (auto i : idx) s += v[i];
      return s / idx.size();
    };
    auto ci = percentile_bootstrap(v.size(), stat, 300, 9);
    CHECK(ci.first <= mean(v));
    CHECK(ci.second >= mean(v));
    CHECK(ci == percentile_bootstrap(v.size(), stat, 300, 9));
  }

  TEST_CASE("quantiles") {
    std::vector<double> s{1, 2, 3, 4, 5};
    CHECK(quantile_sorted(s, 0.0) == 1.0);
    CHECK(quantile_sorted(s, 1.0) == 5.0);
    CHECK(quantile_sorted(s, 0.5) == 3.0);
  }
}
