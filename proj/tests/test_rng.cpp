#include <doctest.h>

#include <cmath>
#include <set>

#include "bnswarm/rng.hpp"

using namespace bnswarm;

TEST_CASE("fnv1a matches the published test vectors") {
  CHECK(fnv1a("") == 0xcbf29ce484222325ull);
  CHECK(fnv1a("a") == 0xaf63dc4c8601ec8cull);
  CHECK(fnv1a("foobar") == 0x85944171f73967e8ull);
}

TEST_CASE("derive_seed separates tags, indices and parents") {
  const std::uint64_t base = 42;
  std::set<std::uint64_t> seen;
  for (std::uint64_t tag = 1; tag <= 16; ++tag) {
    CHECK(seen.insert(derive_seed(base, tag)).second);
    for (std::uint64_t index = 0; index < 8; ++index) {
      CHECK(seen.insert(derive_seed(base, tag, index)).second);
    }
  }
  CHECK(derive_seed(1, 2) != derive_seed(2, 1));
  CHECK(derive_seed(base, 3, 0) != derive_seed(base, 3));
}

TEST_CASE("identical seeds replay identical streams") {
  Rng a(123456789), b(123456789);
  for (int i = 0; i < 1000; ++i) CHECK(a.next() == b.next());
}

TEST_CASE("uniform01 stays in [0, 1) and looks flat") {
  Rng rng(7);
  double sum = 0.0;
  const int n = 100000;
  for (int i = 0; i < n; ++i) {
    const double u = rng.uniform01();
    REQUIRE(u >= 0.0);
    REQUIRE(u < 1.0);
    sum += u;
  }
  CHECK(std::abs(sum / n - 0.5) < 0.005);
}

TEST_CASE("below is unbiased over a small range") {
  Rng rng(11);
  int counts[7] = {};
  const int n = 70000;
  for (int i = 0; i < n; ++i) ++counts[rng.below(7)];
  for (const int c : counts) CHECK(std::abs(c - n / 7) < 600);
}

TEST_CASE("normal draws match the requested moments") {
  Rng rng(13);
  const int n = 200000;
  double sum = 0.0, sq = 0.0;
  for (int i = 0; i < n; ++i) {
    const double x = rng.normal(2.0, 3.0);
    sum += x;
    sq += x * x;
  }
  const double mean = sum / n;
  const double var = sq / n - mean * mean;
  CHECK(std::abs(mean - 2.0) < 0.03);
  CHECK(std::abs(std::sqrt(var) - 3.0) < 0.03);
}
