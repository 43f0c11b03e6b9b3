#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <cstdio>
#include <random>

#include "oracles.hpp"
#include "pstl/primes.hpp"

using Catch::Matchers::WithinAbs;

TEST_CASE("small table contents") {
  const auto t = pstl::sieve(10.0);
  REQUIRE(t.size() == 4);
  CHECK(t.records()[0].p == 2);
  CHECK(t.records()[1].p == 3);
  CHECK(t.records()[2].p == 5);
  CHECK(t.records()[3].p == 7);
  CHECK_THAT(t.records()[0].sqrt_dist, WithinAbs(std::sqrt(2.0) - 1.0, 1e-15));
  CHECK_THAT(t.theta(), WithinAbs(std::log(2.0) + std::log(3.0) + std::log(5.0) + std::log(7.0), 1e-12));
}

TEST_CASE("counts agree with an independent sieve") {
  const auto t = pstl::sieve(1e6, 2);
  CHECK(t.size() == 78498);
  const auto ref = oracle::naive_primes(100000);
  const auto small = pstl::sieve(1e5);
  REQUIRE(small.size() == ref.size());
  for (std::size_t i = 0; i < ref.size(); ++i) REQUIRE(small.records()[i].p == ref[i]);
}

TEST_CASE("nearest integer distance") {
  CHECK_THAT(pstl::nearest_int_distance(2.3), WithinAbs(0.3, 1e-15));
  CHECK_THAT(pstl::nearest_int_distance(2.75), WithinAbs(0.25, 1e-15));
  CHECK(pstl::nearest_int_distance(5.0) == 0.0);
  CHECK_THROWS(pstl::nearest_int_distance(-1.0));
}

TEST_CASE("near-square subset") {
  const auto t = pstl::sieve(30.0);
  CHECK(pstl::near_square_subset(t, 0.05).size() == 0);  // no prime <= 30 qualifies
  CHECK(pstl::near_square_subset(t, 0.5).size() == t.size());
  CHECK_THROWS(pstl::near_square_subset(t, 0.6));
  CHECK_THROWS(pstl::near_square_subset(t, 0.0));
}

TEST_CASE("subsets nest as the window grows") {
  const auto t = pstl::sieve(5000.0);
  std::size_t prev = 0;
  for (double y : {0.02, 0.05, 0.1, 0.2, 0.35, 0.5}) {
    const auto sub = pstl::near_square_subset(t, y);
    CHECK(sub.size() >= prev);
    for (const auto& r : sub.records()) CHECK(r.sqrt_dist < y);
    prev = sub.size();
  }
}

TEST_CASE("retained fraction tracks the window density") {
  // sqrt(p) mod 1 equidistributes, so a window of half-width Y keeps about a
  // 2Y fraction; at Y = 0.1 and X = 1e6 the measured fraction is 0.19882.
  const auto t = pstl::sieve(1e6, 2);
  const double fraction =
      static_cast<double>(pstl::near_square_subset(t, 0.1).size()) /
      static_cast<double>(t.size());
  CHECK_THAT(fraction, WithinAbs(0.2, 0.01));
}

TEST_CASE("square-root distances agree between both evaluation routes") {
  const auto t = pstl::sieve(1e6, 2);
  double worst = 0.0;
  for (const auto& r : t.records()) {
    const double s = std::sqrt(static_cast<double>(r.p));
    worst = std::max(worst, std::abs(r.sqrt_dist - std::abs(s - std::round(s))));
  }
  CHECK(worst <= 1e-12);
}

TEST_CASE("sampled records pass an independent primality check") {
  const auto t = pstl::sieve(1e6, 2);
  std::mt19937_64 rng(11);
  const std::size_t sample = t.size() / 100;
  for (std::size_t s = 0; s < sample; ++s) {
    const auto& r = t.records()[rng() % t.size()];
    REQUIRE(pstl::is_prime_u64(r.p));
  }
  CHECK_FALSE(pstl::is_prime_u64(1));
  CHECK_FALSE(pstl::is_prime_u64(561));        // Carmichael
  CHECK(pstl::is_prime_u64(2305843009213693951ull));  // 2^61 - 1
}

TEST_CASE("resource guard") {
  CHECK_THROWS_WITH(pstl::sieve(2e9), Catch::Matchers::ContainsSubstring("guard"));
  CHECK_THROWS(pstl::sieve(1.0));
}

TEST_CASE("binary cache round trip") {
  const auto t = pstl::sieve(10000.0);
  const std::string path = "pstl_cache_test.bin";
  pstl::save_cache(t, path);
  const auto u = pstl::load_cache(path);
  REQUIRE(u.size() == t.size());
  CHECK(u.cutoff() == t.cutoff());
  for (std::size_t i = 0; i < t.size(); ++i) {
    REQUIRE(u.records()[i].p == t.records()[i].p);
    REQUIRE(u.records()[i].logp == t.records()[i].logp);
    REQUIRE(u.records()[i].sqrt_dist == t.records()[i].sqrt_dist);
  }
  std::remove(path.c_str());
  CHECK_THROWS(pstl::load_cache("does_not_exist.bin"));
}
