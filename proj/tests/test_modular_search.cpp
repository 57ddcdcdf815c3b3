// SPDX-License-Identifier: Apache-2.0
#include "zlab/modular_search.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <cmath>

using namespace zlab;

namespace {

// Independent oracle: every multiple of p up to the bound, every coprime
// numerator, tested with the Euclid expansion directly.
struct BruteHit {
  Integer q, a;
};

std::optional<BruteHit> brute_min_denominator(std::uint64_t p, unsigned M, long long bound) {
  for (long long q = static_cast<long long>(p); q <= bound; q += static_cast<long long>(p))
    for (long long a = 1; a < q; ++a) {
      if (boost::multiprecision::gcd(Integer(a), Integer(q)) != 1) continue;
      const CfExpansion cf = expand(Fraction(Integer(a), Integer(q)));
      bool ok = true;
      for (const Integer& b : cf)
        if (b > M) {
          ok = false;
          break;
        }
      if (ok) return BruteHit{Integer(q), Integer(a)};
    }
  return std::nullopt;
}

}  // namespace

TEST_CASE("minimal modular denominators for small primes") {
  SECTION("p=3") {
    const SearchResult r = min_modular_denominator(3, 2);
    REQUIRE(r.record.has_value());
    REQUIRE(r.record->q == 3);
    REQUIRE(r.record->a == 2);
    REQUIRE(r.record->cf == make_cf({1, 2}));
    REQUIRE(r.record->exponent == Catch::Approx(1.0));
  }
  SECTION("p=5 picks the smallest numerator among equal denominators") {
    // both 2/5 = [0;2,2] and 3/5 = [0;1,1,2] qualify at q = 5
    const SearchResult r = min_modular_denominator(5, 2);
    REQUIRE(r.record.has_value());
    REQUIRE(r.record->q == 5);
    REQUIRE(r.record->a == 2);
    REQUIRE(r.record->cf == make_cf({2, 2}));
  }
  SECTION("p=7") {
    const SearchResult r = min_modular_denominator(7, 2);
    REQUIRE(r.record.has_value());
    REQUIRE(r.record->q == 7);
    REQUIRE(r.record->a == 5);
    REQUIRE(r.record->cf == make_cf({1, 2, 2}));
    REQUIRE(r.record->exponent == Catch::Approx(1.0));
  }
  SECTION("p=2") {
    const SearchResult r = min_modular_denominator(2, 2);
    REQUIRE(r.record.has_value());
    REQUIRE(r.record->q == 2);
    REQUIRE(r.record->a == 1);
  }
}

TEST_CASE("search records are valid and minimal against the brute-force oracle") {
  for (std::uint64_t p : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
    const SearchResult r = min_modular_denominator(p, 2);
    REQUIRE(r.record.has_value());
    // witness validity: re-expansion stays within the bound, q = 0 (mod p)
    REQUIRE(r.record->q % p == 0);
    REQUIRE(boost::multiprecision::gcd(r.record->a, r.record->q) == 1);
    const CfExpansion cf = expand(Fraction(r.record->a, r.record->q));
    REQUIRE(cf == r.record->cf);
    for (const Integer& b : cf) REQUIRE(b <= 2);
    // minimality
    const auto brute = brute_min_denominator(p, 2, r.record->q.convert_to<long long>());
    REQUIRE(brute.has_value());
    REQUIRE(brute->q == r.record->q);
    REQUIRE(brute->a == r.record->a);
  }
}

TEST_CASE("cap exhaustion reports statistics instead of a record") {
  const SearchResult r = min_modular_denominator(997, 2, Integer(100));
  REQUIRE_FALSE(r.record.has_value());
  REQUIRE(r.stats.cap_exhausted);
  REQUIRE(r.stats.nodes_explored > 0);
}

TEST_CASE("M=1 admits no canonical expansion at all") {
  const SearchResult r = min_modular_denominator(5, 1, Integer(1000));
  REQUIRE_FALSE(r.record.has_value());
  REQUIRE(r.stats.cap_exhausted);
}

TEST_CASE("exponent table") {
  SECTION("p in {3,5,7} all have exponent 1") {
    const ExponentTable t = exponent_table({7, 3, 5}, 2);
    REQUIRE(t.rows.size() == 3);
    REQUIRE(t.rows[0].p == 3);
    REQUIRE(t.rows[1].p == 5);
    REQUIRE(t.rows[2].p == 7);
    REQUIRE(t.all_found);
    REQUIRE(t.max_exponent == Catch::Approx(1.0));
  }
  SECTION("empty input gives an empty table") {
    const ExponentTable t = exponent_table({}, 2);
    REQUIRE(t.rows.empty());
    REQUIRE(t.all_found);
  }
  SECTION("per-prime cap exhaustion does not abort the table") {
    const ExponentTable t = exponent_table({3, 997}, 2, Integer(50));
    REQUIRE(t.rows.size() == 2);
    REQUIRE(t.rows[0].result.record.has_value());
    REQUIRE_FALSE(t.rows[1].result.record.has_value());
    REQUIRE_FALSE(t.all_found);
  }
  SECTION("rejects composite entries") {
    REQUIRE_THROWS_AS(exponent_table({4}, 2), std::invalid_argument);
  }
}

TEST_CASE("power intersection at p=5, M=2 finds n=3 via the identity") {
  const PowerIntersectResult r = power_intersect_search(5, 2, 8);
  REQUIRE(r.status == PowerIntersectResult::Status::found);
  REQUIRE(r.n == 3);
  REQUIRE(r.witness.has_value());
  REQUIRE(is_identity(*r.witness));
  REQUIRE(r.factor_quotients == std::vector<std::vector<unsigned>>{{1, 2}, {1, 2}, {1, 2}});
  REQUIRE(r.concatenated == make_cf({1, 2, 1, 2, 1, 2}));
  REQUIRE(r.v == 15);  // <1,2,1,2,1> = 15, divisible by 5
  REQUIRE(r.u == 11);  // <2,1,2,1> = 11
  REQUIRE(r.q_full == 41);
  REQUIRE(r.v % 5 == 0);
  // the reconstructed fraction u/v is the (S-1)-st convergent of the chain
  REQUIRE(evaluate(CfExpansion(r.concatenated.begin(), std::prev(r.concatenated.end()))) ==
          Fraction(r.u, r.v));
}

TEST_CASE("power intersection at p=5, M=3 closes already at n=2") {
  const PowerIntersectResult r = power_intersect_search(5, 3, 8);
  REQUIRE(r.status == PowerIntersectResult::Status::found);
  REQUIRE(r.n == 2);
  REQUIRE(r.witness.has_value());
  REQUIRE(r.witness->c == 0);
  REQUIRE(r.v % 5 == 0);
}

TEST_CASE("power intersection reports an empty base set distinctly") {
  // F_2(2) has no even-parity member: only [0;2] survives and its length is odd
  const PowerIntersectResult r = power_intersect_search(3, 2, 4);
  REQUIRE(r.status == PowerIntersectResult::Status::empty_base);
}

TEST_CASE("bound calculator reproduces the closed forms") {
  const double alpha_star = bound_alpha_star();
  REQUIRE(std::abs(18.0 * alpha_star * alpha_star + 19.0 * alpha_star - 20.0) < 1e-9);

  const BoundEvaluation at_star = evaluate_n_bounds(1.0, alpha_star);
  REQUIRE(at_star.n1_finite);
  REQUIRE(at_star.n1 == Catch::Approx((47.0 + std::sqrt(1801.0)) / 3.0).epsilon(1e-12));
  REQUIRE(at_star.n1 == Catch::Approx(29.8127).epsilon(1e-4));
  // the optimum balances both bounds
  REQUIRE(at_star.n2 == Catch::Approx(at_star.n1).epsilon(1e-9));

  const BoundEvaluation at_zero = evaluate_n_bounds(1.0, 0.0);
  REQUIRE(at_zero.n1 == Catch::Approx(22.0).epsilon(1e-12));

  const BoundEvaluation shallow = evaluate_n_bounds(0.5, 0.0);
  REQUIRE_FALSE(shallow.n1_finite);
  REQUIRE(std::isinf(shallow.n1));

  REQUIRE_THROWS_AS(evaluate_n_bounds(0.0, 0.5), std::invalid_argument);
  REQUIRE_THROWS_AS(evaluate_n_bounds(0.9, 1.5), std::invalid_argument);
}
