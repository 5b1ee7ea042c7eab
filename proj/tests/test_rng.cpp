#include <doctest.h>

#include <set>

#include "dre/rng.hpp"

using dre::Rng;

TEST_CASE("same seed gives the same stream") {
  Rng a(42), b(42);
  for (int i = 0; i < 1000; ++i) CHECK(a.next() == b.next());
}

TEST_CASE("substreams differ by key and are reproducible") {
  Rng a = Rng::substream(7, {1, 2, 3});
  Rng b = Rng::substream(7, {1, 2, 3});
  Rng c = Rng::substream(7, {1, 2, 4});
  Rng d = Rng::substream(8, {1, 2, 3});
  const auto va = a.next();
  CHECK(va == b.next());
  CHECK(va != c.next());
  CHECK(va != d.next());
}

TEST_CASE("uniform01 stays in [0, 1) and has the right mean") {
  Rng r(3);
  double sum = 0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    const double u = r.uniform01();
    REQUIRE(u >= 0.0);
    REQUIRE(u < 1.0);
    sum += u;
  }
  CHECK(sum / n == doctest::Approx(0.5).epsilon(0.01));
}

TEST_CASE("uniform_int covers the closed range evenly") {
  Rng r(11);
  std::vector<int> hits(6, 0);
  const int n = 600000;
  for (int i = 0; i < n; ++i) {
    const auto v = r.uniform_int(1, 6);
    REQUIRE(v >= 1);
    REQUIRE(v <= 6);
    ++hits[static_cast<std::size_t>(v - 1)];
  }
  for (int h : hits) CHECK(std::abs(h / double(n) - 1.0 / 6) < 0.005);
  CHECK(r.uniform_int(5, 5) == 5);
}
