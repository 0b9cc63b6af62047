#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "hofa/fp.hpp"

using namespace hofa;

TEST_CASE("primality gate") {
  CHECK(is_prime(2));
  CHECK(is_prime(3));
  CHECK(is_prime(5));
  CHECK(is_prime(7));
  CHECK_FALSE(is_prime(1));
  CHECK_FALSE(is_prime(4));
  CHECK_FALSE(is_prime(9));
  CHECK_THROWS_AS(FpScalar(1, 6), ValidationError);
}

TEST_CASE("index encoding examples") {
  CHECK(idx_encode(FpVector(3, {1, 2})) == 7);
  CHECK(idx_encode(FpVector(3, {0, 0})) == 0);
  CHECK(idx_decode(8, 3, 2) == FpVector(3, {2, 2}));
  CHECK_THROWS_AS(idx_decode(9, 3, 2), ValidationError);
}

TEST_CASE("index encoding is a bijection") {
  for (std::uint32_t p : {2u, 3u, 5u}) {
    for (std::uint32_t n : {1u, 2u, 3u}) {
      const std::uint64_t size = checked_pow(p, n);
      std::vector<bool> seen(size, false);
      for (std::uint64_t i = 0; i < size; ++i) {
        const std::uint64_t back = idx_encode(idx_decode(i, p, n));
        CHECK(back == i);
        CHECK_FALSE(seen[back]);
        seen[back] = true;
      }
    }
  }
}

TEST_CASE("vector arithmetic examples") {
  CHECK(FpVector(3, {1, 2}) + FpVector(3, {2, 2}) == FpVector(3, {0, 1}));
  CHECK(FpVector(5, {1, 3}).scaled(2) == FpVector(5, {2, 1}));
  CHECK(dot(FpVector(5, {1, 2}), FpVector(5, {3, 4})) == FpScalar(1, 5));
  CHECK_THROWS_AS(FpVector(3, {1}) + FpVector(3, {1, 2}), ValidationError);
  CHECK_THROWS_AS(dot(FpVector(3, {1}), FpVector(5, {1})), ValidationError);
}

TEST_CASE("vector space laws, exhaustive at small sizes") {
  for (std::uint32_t p : {2u, 3u, 5u}) {
    const std::uint32_t n = p == 5 ? 2 : 3;
    const std::uint64_t size = checked_pow(p, n);
    for (std::uint64_t a = 0; a < size; ++a) {
      for (std::uint64_t b = 0; b < size; ++b) {
        const FpVector u = idx_decode(a, p, n);
        const FpVector v = idx_decode(b, p, n);
        CHECK(u + v == v + u);
        for (std::uint32_t c = 0; c < p; ++c) {
          CHECK((u + v).scaled(c) == u.scaled(c) + v.scaled(c));
        }
      }
    }
    // associativity on a slice to keep the loop count sane
    for (std::uint64_t a = 0; a < size; ++a) {
      const FpVector u = idx_decode(a, p, n);
      const FpVector v = idx_decode((a * 7 + 1) % size, p, n);
      const FpVector w = idx_decode((a * 3 + 2) % size, p, n);
      CHECK((u + v) + w == u + (v + w));
    }
  }
}

TEST_CASE("scalar field ops") {
  const FpScalar a(3, 5), b(4, 5);
  CHECK((a + b).value() == 2);
  CHECK((a - b).value() == 4);
  CHECK((a * b).value() == 2);
  CHECK((-a).value() == 2);
  CHECK(a.inverse().value() == 2);
  CHECK_THROWS_AS(FpScalar(0, 5).inverse(), ValidationError);
  CHECK_THROWS_AS(a + FpScalar(1, 7), ValidationError);
}

TEST_CASE("group index arithmetic agrees with vector arithmetic") {
  GroupIndex g(3, 3);
  for (std::uint64_t a = 0; a < g.size(); ++a) {
    for (std::uint64_t b = 0; b < g.size(); ++b) {
      const FpVector sum = idx_decode(a, 3, 3) + idx_decode(b, 3, 3);
      CHECK(g.add(a, b) == idx_encode(sum));
    }
    CHECK(g.add(a, g.negate(a)) == 0);
    CHECK(g.scale(2, a) == g.add(a, a));
  }
}
