#include "cmod/combinatorics.hpp"

#include <stdexcept>

#include "doctest.h"
#include "support.hpp"

using namespace cmod;

TEST_CASE("binomial basics and edge cases") {
  CHECK(binomial(0, 0) == 1);
  CHECK(binomial(5, 0) == 1);
  CHECK(binomial(5, 5) == 1);
  CHECK(binomial(5, 2) == 10);
  CHECK(binomial(8, 4) == 70);
  CHECK(binomial(11, 3) == 165);
  CHECK(binomial(4, 3) == 4);
  CHECK(binomial(-1, 0) == 0);
  CHECK(binomial(3, -1) == 0);
  CHECK(binomial(3, 5) == 0);
  // Pascal identity over a grid.
  for (int n = 1; n <= 30; ++n) {
    for (int k = 1; k <= n; ++k) {
      CHECK(binomial(n, k) == binomial(n - 1, k - 1) + binomial(n - 1, k));
    }
  }
  CHECK(binomial(63, 31) == 916312070471295267ULL);
  CHECK(binomial(62, 31) == 465428353255261088ULL);
  CHECK_THROWS_AS(binomial(100, 50), std::overflow_error);
}

TEST_CASE("composition counts match binomial formulas") {
  CHECK(count_weak(3, 3) == 10);
  CHECK(count_weak(4, 4) == 35);
  CHECK(count_weak(6, 4) == 84);
  CHECK(count_weak(0, 3) == 1);
  CHECK(count_weak(5, 1) == 1);
  CHECK(count_strict(7, 4) == 20);
  CHECK(count_strict(6, 4) == 10);
  CHECK(count_strict(12, 4) == 165);
  CHECK(count_strict(4, 4) == 1);
  CHECK(count_strict(3, 4) == 0);
  CHECK_THROWS_AS(count_weak(-1, 3), std::invalid_argument);
  CHECK_THROWS_AS(count_weak(3, 0), std::invalid_argument);
  CHECK_THROWS_AS(count_strict(0, 2), std::invalid_argument);
}

TEST_CASE("enumeration matches the brute-force tuple oracle") {
  for (int total = 0; total <= 8; ++total) {
    for (int n = 1; n <= 8; ++n) {
      const auto expect = testsupport::brute_tuples(total, n, 0);
      const auto got = enumerate_weak(total, n);
      REQUIRE(got.size() == expect.size());
      REQUIRE(got.size() == count_weak(total, n));
      for (std::size_t i = 0; i < got.size(); ++i) {
        CHECK(got[i].parts == expect[i]);
        CHECK(got[i].total == total);
        CHECK(got[i].kind == CompositionKind::weak);
      }
    }
  }
  for (int total = 1; total <= 8; ++total) {
    for (int n = 1; n <= total; ++n) {
      const auto expect = testsupport::brute_tuples(total, n, 1);
      const auto got = enumerate_strict(total, n);
      REQUIRE(got.size() == expect.size());
      REQUIRE(got.size() == count_strict(total, n));
      for (std::size_t i = 0; i < got.size(); ++i) {
        CHECK(got[i].parts == expect[i]);
      }
    }
  }
}

TEST_CASE("enumeration refuses oversized requests without allocating") {
  CHECK_THROWS_AS(enumerate_weak(40, 12), std::length_error);
}

TEST_CASE("subset rank matches lexicographic position") {
  // All 2-subsets of {0..4} in lexicographic order.
  CHECK(rank_subset(5, {0, 1}) == 0);
  CHECK(rank_subset(5, {0, 2}) == 1);
  CHECK(rank_subset(5, {1, 3}) == 5);
  CHECK(rank_subset(5, {2, 4}) == 8);
  CHECK(rank_subset(5, {3, 4}) == 9);
  CHECK(rank_subset(4, {}) == 0);

  for (int n = 0; n <= 10; ++n) {
    for (int k = 0; k <= n; ++k) {
      const std::uint64_t count = binomial(n, k);
      std::vector<int> prev;
      for (std::uint64_t r = 0; r < count; ++r) {
        const auto subset = unrank_subset(n, k, r);
        REQUIRE(static_cast<int>(subset.size()) == k);
        CHECK(rank_subset(n, subset) == r);
        if (r > 0) CHECK(prev < subset);  // strictly ascending lex order
        prev = subset;
      }
      CHECK_THROWS_AS(unrank_subset(n, k, count), std::out_of_range);
    }
  }
  CHECK_THROWS_AS(rank_subset(5, {1, 1}), std::invalid_argument);
  CHECK_THROWS_AS(rank_subset(5, {3, 2}), std::invalid_argument);
  CHECK_THROWS_AS(rank_subset(5, {0, 5}), std::invalid_argument);
  CHECK_THROWS_AS(unrank_subset(4, 5, 0), std::invalid_argument);
}

TEST_CASE("weak composition ranks agree with enumeration order") {
  // Spot values for 3 units in 3 parts.
  CHECK(rank_weak(make_weak_composition({0, 0, 3})) == 0);
  CHECK(rank_weak(make_weak_composition({0, 1, 2})) == 1);
  CHECK(rank_weak(make_weak_composition({1, 1, 1})) == 5);
  CHECK(rank_weak(make_weak_composition({2, 1, 0})) == 8);
  CHECK(rank_weak(make_weak_composition({3, 0, 0})) == 9);
  CHECK(unrank_weak(4, 4, 17).parts == std::vector<int>{1, 0, 2, 1});

  for (int total = 0; total <= 8; ++total) {
    for (int n = 1; n <= 8; ++n) {
      const auto all = enumerate_weak(total, n);
      for (std::size_t r = 0; r < all.size(); ++r) {
        CHECK(rank_weak(all[r]) == r);
        CHECK(unrank_weak(total, n, r).parts == all[r].parts);
      }
      CHECK_THROWS_AS(unrank_weak(total, n, all.size()), std::out_of_range);
    }
  }
}

TEST_CASE("strict/weak shift is an order-preserving bijection") {
  for (int total = 1; total <= 8; ++total) {
    for (int n = 1; n <= total; ++n) {
      const auto strict = enumerate_strict(total, n);
      const auto weak = enumerate_weak(total - n, n);
      REQUIRE(strict.size() == weak.size());
      for (std::size_t r = 0; r < strict.size(); ++r) {
        CHECK(strict_to_weak(strict[r]).parts == weak[r].parts);
        CHECK(weak_to_strict(weak[r]).parts == strict[r].parts);
        CHECK(rank_weak(strict_to_weak(strict[r])) == r);
      }
    }
  }
}

TEST_CASE("composition factories validate parts") {
  CHECK_THROWS_AS(make_weak_composition({}), std::invalid_argument);
  CHECK_THROWS_AS(make_weak_composition({1, -1}), std::invalid_argument);
  CHECK_THROWS_AS(make_strict_composition({1, 0}), std::invalid_argument);
  CHECK(make_weak_composition({0, 0}).total == 0);
  CHECK(make_strict_composition({2, 3}).total == 5);
  CHECK(make_strict_composition({2, 3}).kind == CompositionKind::strict);
  CHECK_THROWS_AS(rank_weak(make_strict_composition({1, 2})),
                  std::invalid_argument);
}
