#include <doctest.h>

#include <cmath>
#include <set>
#include <vector>

#include "tsrw/random_stream.hpp"

using namespace tsrw;

TEST_CASE("philox known answers") {
  // Reference vectors distributed with Random123 (kat_vectors, philox4x32_10).
  CHECK(philox4x32_10({0, 0, 0, 0}, {0, 0}) ==
        PhiloxBlock{0x6627e8d5u, 0xe169c58du, 0xbc57ac4cu, 0x9b00dbd8u});
  CHECK(philox4x32_10({0xffffffffu, 0xffffffffu, 0xffffffffu, 0xffffffffu},
                      {0xffffffffu, 0xffffffffu}) ==
        PhiloxBlock{0x408f276du, 0x41c83b0eu, 0xa20bc7c6u, 0x6d5451fdu});
  CHECK(philox4x32_10({0x243f6a88u, 0x85a308d3u, 0x13198a2eu, 0x03707344u},
                      {0xa4093822u, 0x299f31d0u}) ==
        PhiloxBlock{0xd16cfe09u, 0x94fdccebu, 0x5001e420u, 0x24126ea1u});
}

TEST_CASE("philox is usable at compile time") {
  constexpr auto b = philox4x32_10({0, 0, 0, 0}, {0, 0});
  static_assert(b[0] == 0x6627e8d5u);
}

TEST_CASE("open uniform never hits the endpoints") {
  CHECK(bits_to_open_uniform(0) == 0x1p-53);
  CHECK(bits_to_open_uniform(~std::uint64_t{0}) < 1.0);
  CHECK(bits_to_open_uniform(~std::uint64_t{0}) == 1.0 - 0x1p-53);
}

TEST_CASE("stream positions are random access") {
  RandomStream a(42, 3);
  std::vector<double> seq;
  for (int i = 0; i < 9; ++i) seq.push_back(a.uniform());
  RandomStream b(42, 3, 5);
  CHECK(b.uniform() == seq[5]);
  RandomStream c(42, 3);
  c.skip(7);
  CHECK(c.uniform() == seq[7]);
  CHECK(c.position() == 8);
}

TEST_CASE("streams and seeds differ") {
  RandomStream a(1, 0), b(1, 1), c(2, 0);
  const double x = a.uniform(), y = b.uniform(), z = c.uniform();
  CHECK(x != y);
  CHECK(x != z);
}

TEST_CASE("uniform moments") {
  RandomStream rng(123, 0);
  const int n = 200000;
  double s = 0, s2 = 0;
  for (int i = 0; i < n; ++i) {
    const double u = rng.uniform();
    REQUIRE(u > 0.0);
    REQUIRE(u < 1.0);
    s += u;
    s2 += u * u;
  }
  CHECK(std::abs(s / n - 0.5) < 4 * std::sqrt(1.0 / 12 / n));
  CHECK(std::abs(s2 / n - 1.0 / 3) < 0.003);
}
