#include <doctest.h>

#include <cmath>
#include <set>

#include "tchaos/rng.hpp"

using namespace tchaos;

TEST_SUITE("rng") {
  // Known-answer vectors of the Random123 reference implementation.
  TEST_CASE("philox4x32-10 known answers") {
    CHECK(philox4x32_10({0, 0, 0, 0}, {0, 0}) == PhiloxCounter{0x6627e8d5u, 0xe169c58du, 0xbc57ac4cu, 0x9b00dbd8u});
    CHECK(philox4x32_10({0xffffffffu, 0xffffffffu, 0xffffffffu, 0xffffffffu}, {0xffffffffu, 0xffffffffu}) ==
          PhiloxCounter{0x408f276du, 0x41c83b0eu, 0xa20bc7c6u, 0x6d5451fdu});
    CHECK(philox4x32_10({0x243f6a88u, 0x85a308d3u, 0x13198a2eu, 0x03707344u}, {0xa4093822u, 0x299f31d0u}) ==
          PhiloxCounter{0xd16cfe09u, 0x94fdccebu, 0x5001e420u, 0x24126ea1u});
  }

  TEST_CASE("streams are reproducible and separated") {
    Stream a(7, 3, stream_tag::field), b(7, 3, stream_tag::field), c(7, 4, stream_tag::field), d(7, 3, stream_tag::mc);
    for (int i = 0; i < 100; ++i) {
      auto x = a.next_u64();
      CHECK(x == b.next_u64());
      CHECK(x != c.next_u64());
      CHECK(x != d.next_u64());
    }
  }

  TEST_CASE("uniform in the open interval, normal moments") {
    Stream s(1, 0);
    double m = 0, m2 = 0, m4 = 0;
    const int n = 200000;
    for (int i = 0; i < n; ++i) {
      double u = s.uniform();
      REQUIRE(u > 0.0);
      REQUIRE(u < 1.0);
    }
    for (int i = 0; i < n; ++i) {
      double z = s.normal();
      m += z;
      m2 += z * z;
      m4 += z * z * z * z;
    }
    m /= n;
    m2 /= n;
    m4 /= n;
    CHECK(std::fabs(m) < 4.0 / std::sqrt(n));
    CHECK(std::fabs(m2 - 1.0) < 4.0 * std::sqrt(2.0 / n));
    CHECK(std::fabs(m4 - 3.0) < 4.0 * std::sqrt(96.0 / n));
  }
}
