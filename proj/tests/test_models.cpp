#include <doctest.h>

#include <cmath>

#include "tchaos/errors.hpp"
#include "tchaos/models.hpp"

using namespace tchaos;

namespace {
ModelField small_field(ModelFamily f, double eps, double cutoff) {
  ModelFieldSpec s;
  s.family = f;
  s.epsilon = eps;
  s.cutoff = cutoff;
  return ModelField(s);
}
}  // namespace

TEST_SUITE("models") {
  TEST_CASE("heat stencil") {
    CHECK(heat_stencil_value({-0.01, 0.0}, 0.001, 0.5, false) == 0.0);
    CHECK(heat_stencil_value({0.0, 0.9}, 0.001, 0.5, false) == 0.0);
    double t = 0.0105;
    CHECK(heat_stencil_value({0.01, 0.05}, 0.001, 0.5, false) ==
          doctest::Approx(std::exp(-0.0025 / (4 * t)) / std::sqrt(4 * M_PI * t)));
    CHECK(heat_stencil_value({0.01, 0.05}, 0.001, 0.5, true) ==
          doctest::Approx(-0.05 / (2 * t) * std::exp(-0.0025 / (4 * t)) / std::sqrt(4 * M_PI * t)));
  }

  TEST_CASE("field construction") {
    CHECK(model_geometry(ModelFamily::phi43).total() == 5.0);
    CHECK(parse_family("kpz") == ModelFamily::kpz);
    CHECK(parse_symbol("2'") == ModelSymbol::s2);
    CHECK(parse_symbol("s3") == ModelSymbol::s3);
    auto f = small_field(ModelFamily::kpz, 0.1, 0.25);
    CHECK(f.h() == doctest::Approx(0.05));
    CHECK(f.sigma2() == doctest::Approx(0.1 * f.psi_var()));
    auto a = f.sample(3, 1), b = f.sample(3, 1);
    CHECK(a.values == b.values);
    ModelFieldSpec bad;
    bad.epsilon = 0.1;
    bad.h = 0.08;
    CHECK_THROWS_AS(ModelField{bad}, ResolutionError);
  }

  TEST_CASE("exact variance matches the samples") {
    auto f = small_field(ModelFamily::kpz, 0.1, 0.25);
    double acc = 0.0;
    long n = 0;
    for (int i = 0; i < 200; ++i) {
      auto s = f.sample(1, i);
      for (std::size_t j = 0; j < s.values.size(); j += 7, ++n) acc += s.values[j] * s.values[j];
    }
    CHECK(acc / n == doctest::Approx(f.psi_var()).epsilon(0.05));
  }

  TEST_CASE("cubic nonlinearity gives the Wick square") {
    auto f = small_field(ModelFamily::phi43, 0.1, 0.125);
    auto G = make_nonlinearity(NonlinearityKind::polynomial, 0.5, {0, 0, 0, 1});
    auto o2 = make_object(ModelFamily::phi43, ModelSymbol::s2, G, f);
    auto o3 = make_object(ModelFamily::phi43, ModelSymbol::s3, G, f);
    auto o0 = make_object(ModelFamily::phi43, ModelSymbol::s0, G, f);
    CHECK(o2.a == doctest::Approx(1.0));
    CHECK(o2.C == doctest::Approx(f.psi_var()));
    auto s = f.sample(9, 0);
    const double v = f.psi_var();
    for (std::size_t j = 0; j < s.values.size(); j += 97) {
      double p = s.values[j];
      CHECK(eval_object(o2, s, j) == doctest::Approx(p * p - v).epsilon(1e-10));
      CHECK(eval_object(o3, s, j) == doctest::Approx(p * p * p - 3 * v * p).epsilon(1e-10));
      CHECK(eval_object(o0, s, j) == doctest::Approx(0.0));
      CHECK(polynomial_object_oracle(o2, s, j) == doctest::Approx(eval_object(o2, s, j)).epsilon(1e-10));
    }
  }

  TEST_CASE("empirical constant agrees with the analytic one") {
    auto f = small_field(ModelFamily::kpz, 0.1, 0.25);
    auto F = make_nonlinearity(NonlinearityKind::power_even, 0.5);
    auto an = make_object(ModelFamily::kpz, ModelSymbol::s2, F, f);
    auto em = an;
    double se = set_empirical_constant(em, f, 100, 4);
    CHECK(se > 0.0);
    CHECK(std::fabs(em.C - an.C) <= 4.0 * se);
  }

  TEST_CASE("Hoelder norm grows with the number of scales") {
    auto f = small_field(ModelFamily::kpz, 0.05, 0.25);
    auto F = make_nonlinearity(NonlinearityKind::power_even, 0.5);
    auto o = make_object(ModelFamily::kpz, ModelSymbol::s2, F, f);
    auto s = f.sample(2, 0);
    std::vector<double> v(s.values.size());
    for (std::size_t j = 0; j < v.size(); ++j) v[j] = eval_object(o, s, j);
    double lmax = std::min(0.25, std::sqrt(f.lattice()->extent[0]));
    auto h1 = holder_norm(f, v, -1.1, 1, 4, lmax), h3 = holder_norm(f, v, -1.1, 3, 4, lmax);
    CHECK(h1.value > 0.0);
    CHECK(h3.value >= h1.value);
    CHECK_THROWS_AS(holder_norm(f, v, 0.5, 1, 4, lmax), PreconditionError);
  }

  TEST_CASE("no mollification, no remainder") {
    RemainderQuery q;
    q.field.family = ModelFamily::kpz;
    q.field.epsilon = 0.1;
    q.field.cutoff = 0.25;
    q.nonlinearity = make_nonlinearity(NonlinearityKind::power_even, 0.5);
    q.delta = 0.0;
    q.n_samples = 200;
    CHECK(remainder_pairing(q).value == 0.0);
    CHECK(mollification_gap(q).value == 0.0);
  }
}
