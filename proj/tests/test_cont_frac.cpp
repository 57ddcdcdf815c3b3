// SPDX-License-Identifier: Apache-2.0
#include "zlab/cont_frac.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <functional>
#include <random>
#include <vector>

using namespace zlab;

namespace {

// Independent oracle: forward convergent recurrence
//   p_k = b_k p_{k-1} + p_{k-2},  q_k = b_k q_{k-1} + q_{k-2}
// with (p_0, p_-1) = (0, 1) and (q_0, q_-1) = (1, 0).
Fraction convergent_oracle(const CfExpansion& cf) {
  Integer p_prev = 1, p_cur = 0, q_prev = 0, q_cur = 1;
  for (const Integer& b : cf) {
    Integer np = b * p_cur + p_prev;
    Integer nq = b * q_cur + q_prev;
    p_prev = p_cur;
    p_cur = np;
    q_prev = q_cur;
    q_cur = nq;
  }
  return Fraction::reduced(p_cur, q_cur);
}

// Independent oracle: the textbook top-down continuant recursion.
Integer continuant_oracle(const std::vector<int>& b, std::size_t n) {
  if (n == 0) return 1;
  if (n == 1) return b[0];
  return Integer(b[n - 1]) * continuant_oracle(b, n - 1) + continuant_oracle(b, n - 2);
}

struct TinyMat {
  Integer m00, m01, m10, m11;
};

TinyMat tiny_mul(const TinyMat& x, const TinyMat& y) {
  return {x.m00 * y.m00 + x.m01 * y.m10, x.m00 * y.m01 + x.m01 * y.m11,
          x.m10 * y.m00 + x.m11 * y.m10, x.m10 * y.m01 + x.m11 * y.m11};
}

// Independent oracle: multiply out the factors (0 1 | 1 b_j) directly.
TinyMat matrix_oracle(const CfExpansion& cf) {
  TinyMat acc{1, 0, 0, 1};
  for (const Integer& b : cf) acc = tiny_mul(acc, TinyMat{0, 1, 1, b});
  return acc;
}

}  // namespace

TEST_CASE("fraction type enforces its invariants") {
  REQUIRE_THROWS_AS(Fraction(Integer(1), Integer(0)), std::invalid_argument);
  REQUIRE_THROWS_AS(Fraction(Integer(2), Integer(4)), std::invalid_argument);
  REQUIRE_THROWS_AS(Fraction(Integer(3), Integer(2)), std::invalid_argument);
  REQUIRE(Fraction::reduced(Integer(2), Integer(4)) == Fraction(Integer(1), Integer(2)));
  REQUIRE(Fraction(Integer(0), Integer(1)).is_zero());
  REQUIRE(Fraction(Integer(1), Integer(1)).is_one());
}

TEST_CASE("expand produces the canonical Euclidean expansion") {
  REQUIRE(expand(Fraction(Integer(1), Integer(2))) == make_cf({2}));
  REQUIRE(expand(Fraction(Integer(2), Integer(5))) == make_cf({2, 2}));
  REQUIRE(expand(Fraction(Integer(5), Integer(7))) == make_cf({1, 2, 2}));
  REQUIRE(expand(Fraction(Integer(0), Integer(1))).empty());
  // reserved endpoint form for 1/1
  REQUIRE(expand(Fraction(Integer(1), Integer(1))) == make_cf({1}));
}

TEST_CASE("evaluate folds exactly and matches the convergent oracle") {
  REQUIRE(evaluate({}) == Fraction(Integer(0), Integer(1)));
  REQUIRE(evaluate(make_cf({2, 2})) == Fraction(Integer(2), Integer(5)));
  REQUIRE(evaluate(make_cf({1, 2, 2})) == Fraction(Integer(5), Integer(7)));
  REQUIRE_THROWS_AS(evaluate(make_cf({1, 0, 2})), std::invalid_argument);

  for (const auto& cf : {make_cf({1}), make_cf({3, 1, 4, 1, 5}), make_cf({2, 7, 1, 8}),
                         make_cf({9, 9, 9, 9, 9, 9})})
    REQUIRE(evaluate(cf) == convergent_oracle(cf));
}

TEST_CASE("roundtrip and canonicity over all coprime pairs with q <= 300") {
  for (int q = 1; q <= 300; ++q)
    for (int a = 0; a <= q; ++a) {
      if (boost::multiprecision::gcd(Integer(a), Integer(q)) != 1) continue;
      const Fraction f{Integer(a), Integer(q)};
      const CfExpansion cf = expand(f);
      REQUIRE(evaluate(cf) == f);
      if (0 < a && a < q) {
        REQUIRE(is_canonical(cf));
        REQUIRE(cf.back() >= 2);
      }
    }
}

TEST_CASE("continuant base cases and recurrence oracle") {
  REQUIRE(continuant(CfExpansion{}) == 1);
  REQUIRE(continuant(make_cf({1, 2})) == 3);
  REQUIRE(continuant(make_cf({1, 2, 2})) == 7);

  const std::vector<int> seq{2, 1, 3, 1, 2, 4, 1};
  for (std::size_t n = 0; n <= seq.size(); ++n) {
    CfExpansion cf;
    for (std::size_t i = 0; i < n; ++i) cf.emplace_back(seq[i]);
    REQUIRE(continuant(cf) == continuant_oracle(seq, n));
  }
}

TEST_CASE("continuant mirror symmetry, brute force over short sequences") {
  // K(b_1..b_n) = K(b_n..b_1) for every sequence with n <= 8, entries <= 4
  std::vector<int> stack;
  std::uint64_t mismatches = 0, checked = 0;
  const std::function<void(int)> walk = [&](int depth) {
    if (depth > 0) {
      CfExpansion fwd, rev;
      for (int b : stack) fwd.emplace_back(b);
      for (auto it = stack.rbegin(); it != stack.rend(); ++it) rev.emplace_back(*it);
      ++checked;
      if (continuant(fwd) != continuant(rev)) ++mismatches;
    }
    if (depth == 8) return;
    for (int b = 1; b <= 4; ++b) {
      stack.push_back(b);
      walk(depth + 1);
      stack.pop_back();
    }
  };
  walk(0);
  REQUIRE(checked == 87380);
  REQUIRE(mismatches == 0);
}

TEST_CASE("cf_to_matrix matches direct 2x2 multiplication") {
  const Mat2 m12 = cf_to_matrix(make_cf({1, 2}));
  REQUIRE(m12.p_prev == 1);
  REQUIRE(m12.p_cur == 2);
  REQUIRE(m12.q_prev == 1);
  REQUIRE(m12.q_cur == 3);
  REQUIRE(m12.det() == 1);

  const Mat2 m22 = cf_to_matrix(make_cf({2, 2}));
  REQUIRE(m22.p_prev == 1);
  REQUIRE(m22.p_cur == 2);
  REQUIRE(m22.q_prev == 2);
  REQUIRE(m22.q_cur == 5);
  REQUIRE(m22.det() == 1);

  const Mat2 m2 = cf_to_matrix(make_cf({2}));
  REQUIRE(m2.p_prev == 0);
  REQUIRE(m2.p_cur == 1);
  REQUIRE(m2.q_prev == 1);
  REQUIRE(m2.q_cur == 2);
  REQUIRE(m2.det() == -1);

  const Mat2 empty = cf_to_matrix({});
  REQUIRE(empty.is_empty_product());
  REQUIRE(empty.det() == 1);

  for (const auto& cf : {make_cf({3, 1, 4}), make_cf({1, 1, 1, 1, 1}), make_cf({7, 2, 9, 4})}) {
    const Mat2 m = cf_to_matrix(cf);
    const TinyMat o = matrix_oracle(cf);
    REQUIRE(m.p_prev == o.m00);
    REQUIRE(m.p_cur == o.m01);
    REQUIRE(m.q_prev == o.m10);
    REQUIRE(m.q_cur == o.m11);
  }
}

TEST_CASE("matrix law: determinant sign and convergent columns") {
  // exhaustively for q <= 300, then on random larger fractions up to 10^4
  for (int q = 2; q <= 300; ++q)
    for (int a = 1; a < q; ++a) {
      if (boost::multiprecision::gcd(Integer(a), Integer(q)) != 1) continue;
      const CfExpansion cf = expand(Fraction(Integer(a), Integer(q)));
      const Mat2 m = cf_to_matrix(cf);
      REQUIRE(m.det() == (cf.size() % 2 == 0 ? 1 : -1));
      REQUIRE(m.q_cur == q);
      REQUIRE(m.p_cur == a);
      REQUIRE(m.q_cur == continuant(cf));
      REQUIRE(m.p_cur == continuant(std::next(cf.begin()), cf.end()));
      if (cf.size() >= 2) {
        CfExpansion head(cf.begin(), std::prev(cf.end()));
        REQUIRE(evaluate(head) == Fraction::reduced(m.p_prev, m.q_prev));
      }
    }
  std::mt19937_64 gen(7);
  for (int i = 0; i < 5000; ++i) {
    const int q = 2001 + static_cast<int>(gen() % 8000);
    const int a = 1 + static_cast<int>(gen() % (q - 1));
    const Fraction f = Fraction::reduced(Integer(a), Integer(q));
    if (f.is_one()) continue;
    const CfExpansion cf = expand(f);
    const Mat2 m = cf_to_matrix(cf);
    REQUIRE(m.det() == (cf.size() % 2 == 0 ? 1 : -1));
    REQUIRE(m.p_cur == f.num());
    REQUIRE(m.q_cur == f.den());
  }
}

TEST_CASE("cyclic trace equals q_s + p_{s-1}") {
  REQUIRE(cyclic_trace(make_cf({1, 2})) == 4);
  REQUIRE(cyclic_trace(make_cf({2, 2})) == 6);
  REQUIRE(cyclic_trace(make_cf({2})) == 2);
  REQUIRE_THROWS_AS(cyclic_trace({}), std::invalid_argument);
}

TEST_CASE("twin expansions evaluate to the same fraction") {
  for (const auto& cf : {make_cf({2}), make_cf({1, 2, 2}), make_cf({3, 1, 4}), make_cf({5, 1})}) {
    const CfExpansion tw = twin_of(cf);
    REQUIRE(evaluate(tw) == evaluate(cf));
    REQUIRE(twin_of(tw) == cf);
  }
  REQUIRE_THROWS_AS(twin_of({}), std::invalid_argument);
  REQUIRE_THROWS_AS(twin_of(make_cf({1})), std::invalid_argument);
}

TEST_CASE("bounded-quotient membership under both rules") {
  const Integer two(2);
  // 1/3 = [0;3] = [0;2,1]: only the twin stays within M = 2
  const Fraction third(Integer(1), Integer(3));
  REQUIRE_FALSE(quotients_bounded(third, two, MembershipRule::canonical));
  REQUIRE(quotients_bounded(third, two, MembershipRule::either_twin));
  // 2/3 = [0;1,2] is canonical within M = 2
  REQUIRE(quotients_bounded(Fraction(Integer(2), Integer(3)), two, MembershipRule::canonical));
  // 1/4 = [0;4] = [0;3,1] is outside either way for M = 2
  REQUIRE_FALSE(quotients_bounded(Fraction(Integer(1), Integer(4)), two, MembershipRule::either_twin));
  // endpoints always belong
  REQUIRE(quotients_bounded(Fraction(Integer(0), Integer(1)), Integer(1), MembershipRule::canonical));
  REQUIRE(quotients_bounded(Fraction(Integer(1), Integer(1)), Integer(1), MembershipRule::canonical));
}

TEST_CASE("expansion text form") {
  REQUIRE(cf_to_string(make_cf({1, 2, 2})) == "[0;1,2,2]");
  REQUIRE(cf_to_string({}) == "[0]");
}
