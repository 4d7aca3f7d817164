#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "support/oracles.hpp"
#include "wearsim/policy.hpp"
#include "wearsim/rng.hpp"

using namespace wearsim;

TEST_CASE("golden fraction constant") {
  CHECK(kGoldenShiftFraction == doctest::Approx((3.0 - std::sqrt(5.0)) / 2.0).epsilon(1e-15));
  const double phi = (1.0 + std::sqrt(5.0)) / 2.0;
  CHECK(kGoldenShiftFraction == doctest::Approx(1.0 - 1.0 / phi).epsilon(1e-15));
}

TEST_CASE("golden_shift examples") {
  CHECK(golden_shift(360) == 137);
  CHECK(golden_shift(1'000'000) == 381'966);
  CHECK(golden_shift(2) == 0);
}

TEST_CASE("golden_shift matches the exact integer oracle") {
  CHECK(testing::exact_golden_floor(360) == 137);
  CHECK(testing::exact_golden_floor(1'000'000) == 381'966);
  for (std::uint64_t n = 2; n < 200'000; ++n) {
    REQUIRE(golden_shift(n) == testing::exact_golden_floor(n));
  }
  Rng rng(11);
  for (int i = 0; i < 20'000; ++i) {
    const std::uint64_t n = rng.between(2, (std::uint64_t{1} << 40) - 1);
    REQUIRE(golden_shift(n) == testing::exact_golden_floor(n));
  }
}

TEST_CASE("next_petal: golden on a 360-cell ring") {
  PolicyState state(GoldenPolicy{});
  CHECK(state.next_petal(0, 360) == 0);
  CHECK(state.next_petal(0, 360) == 137);
  CHECK(state.next_petal(0, 360) == 274);
  CHECK(state.next_petal(0, 360) == 51);
  // The other ring keeps its own progression.
  CHECK(state.next_petal(1, 360) == 0);
  CHECK(state.next_petal(1, 360) == 137);
  CHECK(state.next_start()[0] == (51 + 137) % 360);
}

TEST_CASE("next_petal: none always returns the head") {
  PolicyState state(NoShiftPolicy{});
  for (unsigned i = 0; i < 10; ++i) CHECK(state.next_petal(i % 2, 97) == 0);
}

TEST_CASE("next_petal: single-space kind is a contract violation") {
  PolicyState state(SingleCompactPolicy{});
  CHECK_THROWS_AS(state.next_petal(0, 10), PolicyContractError);
  CHECK_THROWS_AS(petal_sequence(SingleCompactPolicy{}, 10, 1), PolicyContractError);
}

TEST_CASE("petal_sequence: golden 360 is a permutation") {
  const auto seq = petal_sequence(GoldenPolicy{}, 360, 360);
  // Brute-force enumeration of k * 137 mod 360.
  std::vector<std::uint64_t> brute;
  for (std::uint64_t k = 0; k < 360; ++k) brute.push_back(k * 137 % 360);
  CHECK(seq == brute);
  auto sorted = seq;
  std::sort(sorted.begin(), sorted.end());
  std::vector<std::uint64_t> all(360);
  std::iota(all.begin(), all.end(), 0);
  CHECK(sorted == all);
}

TEST_CASE("petal_sequence: quarter") {
  CHECK(petal_sequence(QuarterPolicy{}, 1000, 5) ==
        std::vector<CellIndex>{0, 250, 500, 750, 0});
}

TEST_CASE("petal_sequence: range, determinism and step invariance") {
  const std::vector<PolicyKind> kinds = {GoldenPolicy{}, QuarterPolicy{},
                                         FractionPolicy{0.1}, FractionPolicy{0.0},
                                         NoShiftPolicy{}, RandomPolicy{42}};
  Rng rng(3);
  for (int trial = 0; trial < 200; ++trial) {
    const std::uint64_t n = rng.between(2, 5000);
    const std::uint64_t count = rng.between(1, 300);
    for (const auto& kind : kinds) {
      const auto seq = petal_sequence(kind, n, count);
      REQUIRE(seq.size() == count);
      CHECK(seq.front() == 0);
      CHECK(seq == petal_sequence(kind, n, count));
      for (auto loc : seq) REQUIRE(loc < n);
      if (std::holds_alternative<RandomPolicy>(kind)) continue;
      const std::uint64_t shift = constant_shift(kind, n);
      for (std::size_t i = 1; i < seq.size(); ++i) {
        REQUIRE((seq[i - 1] + shift) % n == seq[i]);
      }
    }
  }
}

TEST_CASE("random policy: seeded, varies with the seed") {
  CHECK(petal_sequence(RandomPolicy{1}, 1000, 50) == petal_sequence(RandomPolicy{1}, 1000, 50));
  CHECK(petal_sequence(RandomPolicy{1}, 1000, 50) != petal_sequence(RandomPolicy{2}, 1000, 50));
}

TEST_CASE("three-distance property on small rings") {
  for (std::uint64_t n = 2; n <= 600; ++n) {
    const std::uint64_t s = golden_shift(n);
    const std::uint64_t g = std::gcd(s, n);
    const std::uint64_t period = n / g;
    const auto seq = petal_sequence(GoldenPolicy{}, n, period);
    bool repeated = false;
    REQUIRE(testing::max_distinct_gaps_over_prefixes(seq, n, &repeated) <= 3);
    CHECK_FALSE(repeated);
    // One full period is the arithmetic progression of step gcd(s, n).
    const auto gaps = testing::circular_gaps(seq, n);
    REQUIRE(gaps.size() == 1);
    CHECK(gaps.begin()->first == g);
    // The next element closes the cycle.
    CHECK(petal_sequence(GoldenPolicy{}, n, period + 1).back() == 0);
  }
}

TEST_CASE("policy strings round-trip") {
  for (const char* text : {"golden", "quarter", "none", "single", "random:42",
                           "fraction:0.25", "fraction:0.3819660112501051"}) {
    CHECK(policy_name(parse_policy(text)) == text);
  }
  CHECK(parse_policy("fraction:0.5") == PolicyKind{FractionPolicy{0.5}});
  CHECK(is_dual_ring(parse_policy("golden")));
  CHECK_FALSE(is_dual_ring(parse_policy("single")));
  for (const char* bad : {"", "gold", "fraction:", "fraction:1", "fraction:-0.1",
                          "fraction:abc", "random:", "random:-1", "random:1x",
                          "fraction:nan"}) {
    CHECK_THROWS_AS(parse_policy(bad), std::invalid_argument);
  }
}
