#include <doctest.h>

#include <cmath>
#include <memory>

#include "tchaos/experiments.hpp"
#include "tchaos/pairing.hpp"

using namespace tchaos;

namespace {
struct Fixture {
  OperatorSetup s;
  std::shared_ptr<const Lattice> L;
  Spectrum sp;
  Fixture() {
    s.cov.alpha = 0.6;
    s.cov.epsilon = 0.1;
    s.lambda = 0.3;
    s.min_period = 6.0;
    L = std::make_shared<const Lattice>(field_lattice(s.geometry, s.step(0.1), s.min_period));
    sp = build_spectrum(s.cov, *L);
  }
  OperatorConfig config(double tx, double ty) const {
    return OperatorConfig{s.kernel(), TestFunction(s.geometry, Point{0.0}, s.lambda), s.functional(tx, ty), 1, 2.0};
  }
};
}  // namespace

TEST_SUITE("pairing") {
  TEST_CASE("zero frequency gives zero") {
    Fixture f;
    PairingOperator op(f.config(0.0, 1.0), f.L);
    CHECK(op.apply(sample_field(f.sp, 1, 0)) == 0.0);
  }

  TEST_CASE("apply_many agrees with single applications") {
    Fixture f;
    PairingOperator op(f.config(1.0, 1.0), f.L);
    auto s = sample_field(f.sp, 2, 5);
    std::vector<TwoPointFunctional> Fs{f.s.functional(1.0, 1.0), f.s.functional(10.0, 1.0), f.s.functional(1.0, 100.0)};
    auto many = op.apply_many(s, Fs);
    for (std::size_t i = 0; i < Fs.size(); ++i) CHECK(many[i] == doctest::Approx(op.apply(s, Fs[i])).epsilon(1e-12));
    CHECK(std::fabs(many[0]) <= op.envelope(s, Fs[0]) + 1e-12);
    CHECK(op.excluded_cells() > 0);
  }

  TEST_CASE("free function matches the class") {
    Fixture f;
    auto cfg = f.config(3.0, 1.0);
    PairingOperator op(cfg, f.L);
    auto s = sample_field(f.sp, 2, 1);
    CHECK(apply(cfg, s) == doctest::Approx(op.apply(s)));
  }

  TEST_CASE("single-point functional") {
    Fixture f;
    auto s = sample_field(f.sp, 4, 0);
    TestFunction tf(f.s.geometry, {0.0}, 0.3);
    CHECK(apply_single(0.0, ChaosTruncSpec::make(Trig::sin, 1), tf, s) == 0.0);
    double v = apply_single(2.0, ChaosTruncSpec::make(Trig::cos, 0), tf, s);
    CHECK(std::isfinite(v));
  }

  TEST_CASE("subsampling halves the lattice") {
    Fixture f;
    auto s = sample_field(f.sp, 1, 0);
    auto c = subsample(s);
    CHECK(c.values.size() * 2 == s.values.size());
    CHECK(c.values[0] == s.values[0]);
    CHECK(c.values[1] == s.values[2]);
  }
}
