// SPDX-License-Identifier: Apache-2.0
#include "zlab/zaremba.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <set>
#include <sstream>

using namespace zlab;

namespace {

// Independent oracle: scan every coprime pair and filter with the expansion
// predicate; completely ignorant of the continuant-tree traversal.
std::vector<Fraction> brute_force_members(unsigned M, int Q, MembershipRule rule) {
  std::vector<Fraction> out;
  for (int v = 1; v <= Q; ++v)
    for (int u = 0; u <= v; ++u) {
      if (boost::multiprecision::gcd(Integer(u), Integer(v)) != 1) continue;
      const Fraction f{Integer(u), Integer(v)};
      if (quotients_bounded(f, Integer(M), rule)) out.push_back(f);
    }
  std::sort(out.begin(), out.end());
  return out;
}

Fraction frac(long long u, long long v) { return Fraction(Integer(u), Integer(v)); }

}  // namespace

TEST_CASE("enumerate_fractions frozen examples") {
  SECTION("M=2, Q=3 under the canonical rule") {
    const ZarembaSet zs = enumerate_fractions(2, Integer(3), MembershipRule::canonical);
    const std::vector<Fraction> want{frac(0, 1), frac(1, 2), frac(2, 3), frac(1, 1)};
    REQUIRE(zs.members == want);
  }
  SECTION("M=2, Q=3 under either_twin also admits 1/3 = [0;2,1]") {
    const ZarembaSet zs = enumerate_fractions(2, Integer(3), MembershipRule::either_twin);
    const std::vector<Fraction> want{frac(0, 1), frac(1, 3), frac(1, 2), frac(2, 3), frac(1, 1)};
    REQUIRE(zs.members == want);
  }
  SECTION("Q=1 leaves only the endpoints") {
    for (unsigned M : {1u, 2u, 5u}) {
      const ZarembaSet zs = enumerate_fractions(M, Integer(1));
      const std::vector<Fraction> want{frac(0, 1), frac(1, 1)};
      REQUIRE(zs.members == want);
    }
  }
  SECTION("M=1, Q=8 gives the Fibonacci ratios under either_twin") {
    const ZarembaSet zs = enumerate_fractions(1, Integer(8), MembershipRule::either_twin);
    const std::vector<Fraction> want{frac(0, 1), frac(1, 2), frac(3, 5), frac(5, 8),
                                     frac(2, 3), frac(1, 1)};
    auto sorted = want;
    std::sort(sorted.begin(), sorted.end());
    REQUIRE(zs.members == sorted);
  }
}

TEST_CASE("enumeration agrees with the brute-force coprime scan") {
  for (unsigned M = 1; M <= 3; ++M)
    for (int Q : {1, 2, 7, 30, 120})
      for (MembershipRule rule : {MembershipRule::canonical, MembershipRule::either_twin}) {
        const ZarembaSet zs = enumerate_fractions(M, Integer(Q), rule);
        REQUIRE(zs.members == brute_force_members(M, Q, rule));
      }
}

TEST_CASE("count_fractions streams the same cardinality") {
  REQUIRE(count_fractions(2, Integer(3), MembershipRule::canonical) == 4);
  REQUIRE(count_fractions(2, Integer(3), MembershipRule::either_twin) == 5);
  REQUIRE(count_fractions(1, Integer(8), MembershipRule::either_twin) == 6);
  for (unsigned M : {1u, 3u, 9u}) REQUIRE(count_fractions(M, Integer(1)) == 2);
  for (unsigned M = 1; M <= 4; ++M)
    for (int Q : {10, 50, 200})
      for (MembershipRule rule : {MembershipRule::canonical, MembershipRule::either_twin})
        REQUIRE(count_fractions(M, Integer(Q), rule) ==
                enumerate_fractions(M, Integer(Q), rule).members.size());
}

TEST_CASE("enumeration guard rejects oversized requests") {
  REQUIRE_THROWS_AS(enumerate_fractions(2, Integer(1 << 14), MembershipRule::either_twin, 100),
                    std::length_error);
  REQUIRE_THROWS_AS(enumerate_fractions(0, Integer(5)), std::invalid_argument);
  REQUIRE_THROWS_AS(enumerate_fractions(2, Integer(0)), std::invalid_argument);
}

TEST_CASE("split_parity at M=2, Q=7") {
  SECTION("mod 101: no collisions, sizes (2, 3)") {
    const ParitySplit split = split_parity(2, Integer(7), 101);
    REQUIRE(split.even_members.size() == 2);
    REQUIRE(split.odd_members.size() == 3);
    REQUIRE(split.even.size() == 2);
    REQUIRE(split.odd.size() == 3);

    std::set<std::vector<unsigned>> even_quots, odd_quots;
    for (const auto& m : split.even_members) even_quots.insert(m.quotients);
    for (const auto& m : split.odd_members) odd_quots.insert(m.quotients);
    REQUIRE(even_quots == std::set<std::vector<unsigned>>{{1, 2}, {2, 2}});
    REQUIRE(odd_quots == std::set<std::vector<unsigned>>{{2}, {1, 1, 2}, {1, 2, 2}});

    REQUIRE(split.even.contains(make_mat(Integer(1), Integer(2), Integer(1), Integer(3), 101)));
    REQUIRE(split.even.contains(make_mat(Integer(1), Integer(2), Integer(2), Integer(5), 101)));
  }
  SECTION("mod 3: dedup keeps both reduced matrices") {
    const ParitySplit split = split_parity(2, Integer(7), 3);
    REQUIRE(split.even_members.size() == 2);
    REQUIRE(split.even.size() <= 2);
    REQUIRE(split.even.size() == 2);
  }
}

TEST_CASE("split_parity partition property and determinant parity") {
  for (Residue p : {5u, 11u, 101u})
    for (unsigned M = 1; M <= 3; ++M)
      for (int Q : {4, 10, 60}) {
        const ParitySplit split = split_parity(M, Integer(Q), p);
        REQUIRE(split.even_members.size() + split.odd_members.size() ==
                count_fractions(M, Integer(Q), MembershipRule::canonical) - 2);
        for (const auto& m : split.even_members) {
          REQUIRE(m.exact.det() == 1);
          REQUIRE(det(m.reduced) == 1);
          REQUIRE(m.exact.length % 2 == 0);
        }
        for (const auto& m : split.odd_members) {
          REQUIRE(m.exact.det() == -1);
          REQUIRE(det(m.reduced) == p - 1);
          REQUIRE(m.exact.length % 2 == 1);
        }
      }
}

TEST_CASE("split_parity optional filters") {
  const ParitySplit raw = split_parity(2, Integer(12), 11);
  SplitFilters f;
  f.nonzero_entries = true;
  const ParitySplit nz = split_parity(2, Integer(12), 11, f);
  for (const auto& m : nz.even_members) {
    REQUIRE(m.reduced.a != 0);
    REQUIRE(m.reduced.b != 0);
    REQUIRE(m.reduced.c != 0);
    REQUIRE(m.reduced.d != 0);
  }
  REQUIRE(nz.even_members.size() <= raw.even_members.size());
  f.regular_trace = true;
  const ParitySplit reg = split_parity(2, Integer(12), 11, f);
  for (const auto& m : reg.even_members) REQUIRE(is_regular(m.reduced));
}

TEST_CASE("dimension estimate behaves across M") {
  SECTION("M=2 on a short dyadic ladder lands near w_2") {
    const DimensionEstimate est = estimate_dimension(2, dyadic_qs(6, 12));
    REQUIRE_FALSE(est.degenerate);
    REQUIRE(est.w_hat > 0.45);
    REQUIRE(est.w_hat < 0.62);
  }
  SECTION("M=1 counts grow logarithmically") {
    // the F_1 tree is a single Fibonacci path, so large Q stays cheap; the
    // log-derivative only drops under 0.05 once Q is past ~2^14
    const DimensionEstimate est = estimate_dimension(1, dyadic_qs(14, 20), MembershipRule::either_twin);
    REQUIRE(est.w_hat >= 0.0);
    REQUIRE(est.w_hat <= 0.05);
  }
  SECTION("monotone in M on the same samples") {
    const std::vector<Integer> qs = dyadic_qs(6, 10);
    REQUIRE(estimate_dimension(4, qs).w_hat > estimate_dimension(2, qs).w_hat);
  }
  SECTION("degenerate regression is flagged") {
    // M=1 canonical-only: only the endpoints exist at any Q
    const DimensionEstimate est = estimate_dimension(1, dyadic_qs(6, 9), MembershipRule::canonical);
    REQUIRE(est.degenerate);
  }
  SECTION("input validation") {
    REQUIRE_THROWS_AS(estimate_dimension(2, {Integer(16), Integer(32)}), std::invalid_argument);
    REQUIRE_THROWS_AS(estimate_dimension(2, {Integer(8), Integer(16), Integer(32)}),
                      std::invalid_argument);
    REQUIRE_THROWS_AS(
        estimate_dimension(2, {Integer(32), Integer(16), Integer(64)}),
        std::invalid_argument);
  }
}

TEST_CASE("dyadic growth ratios track 2^{2 w_hat}") {
  for (unsigned M : {2u, 3u}) {
    const DimensionEstimate est = estimate_dimension(M, dyadic_qs(8, 12));
    const double growth = std::pow(2.0, 2.0 * est.w_hat);
    for (unsigned e = 10; e <= 11; ++e) {
      const double ratio =
          static_cast<double>(count_fractions(M, Integer(1) << (e + 1))) /
          static_cast<double>(count_fractions(M, Integer(1) << e));
      REQUIRE(ratio >= growth / 2.0);
      REQUIRE(ratio <= growth * 2.0);
    }
  }
}

TEST_CASE("member CSV dump is sorted and exact") {
  const ZarembaSet zs = enumerate_fractions(2, Integer(3), MembershipRule::canonical);
  std::ostringstream os;
  write_members_csv(zs, os);
  REQUIRE(os.str() == "u,v\n0,1\n1,2\n2,3\n1,1\n");
}
