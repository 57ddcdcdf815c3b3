// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "zlab/fraction.hpp"

#include <cstddef>
#include <initializer_list>
#include <string>
#include <vector>

namespace zlab {

// Partial quotients b_1..b_s of a finite continued fraction [0; b_1, ..., b_s].
// Canonical form has b_s >= 2; the reserved form [1] denotes the endpoint 1/1.
using CfExpansion = std::vector<Integer>;

inline CfExpansion make_cf(std::initializer_list<long long> quotients) {
  CfExpansion cf;
  cf.reserve(quotients.size());
  for (long long b : quotients) cf.emplace_back(b);
  return cf;
}

inline void require_positive_quotients(const CfExpansion& cf) {
  for (const Integer& b : cf)
    if (b < 1) throw std::invalid_argument("continued fraction: quotients must be >= 1");
}

inline bool is_canonical(const CfExpansion& cf) { return cf.empty() || cf.back() >= 2; }

// Euclidean expansion. 0/1 -> [], 1/1 -> [1] (the reserved endpoint form);
// every interior fraction gets its unique canonical expansion with b_s >= 2.
inline CfExpansion expand(const Fraction& f) {
  CfExpansion out;
  Integer n = f.num(), d = f.den();
  while (n != 0) {
    out.push_back(d / n);
    Integer r = d % n;
    d = std::move(n);
    n = std::move(r);
  }
  return out;
}

// Bottom-up fold of [0; b_1, ..., b_s]; exact and automatically in lowest terms.
inline Fraction evaluate(const CfExpansion& cf) {
  require_positive_quotients(cf);
  Integer n = 0, d = 1;  // value of the empty tail
  for (auto it = cf.rbegin(); it != cf.rend(); ++it) {
    // x -> 1 / (b + x):  n/d -> d / (b*d + n)
    Integer nd = (*it) * d + n;
    n = std::move(d);
    d = std::move(nd);
  }
  return Fraction(std::move(n), std::move(d));
}

// Continuant K(b_1..b_n): K() = 1, K(b_1) = b_1, K_j = b_j K_{j-1} + K_{j-2}.
template <typename It>
Integer continuant(It first, It last) {
  Integer prev = 0, cur = 1;
  for (; first != last; ++first) {
    Integer next = (*first) * cur + prev;
    prev = std::move(cur);
    cur = std::move(next);
  }
  return cur;
}

inline Integer continuant(const CfExpansion& cf) {
  require_positive_quotients(cf);
  return continuant(cf.begin(), cf.end());
}

// Running product of the elementary factors (0 1 | 1 b_j), laid out as
// rows (p_{s-1} p_s | q_{s-1} q_s) so that p_s/q_s = [0; b_1..b_s] and
// p_{s-1}/q_{s-1} is the previous convergent. length counts the factors;
// length == 0 marks the empty-product identity, which carries no fraction.
struct Mat2 {
  Integer p_prev{1}, p_cur{0};
  Integer q_prev{0}, q_cur{1};
  std::size_t length{0};

  Integer det() const { return p_prev * q_cur - p_cur * q_prev; }
  bool is_empty_product() const { return length == 0; }

  // right-multiply by (0 1 | 1 b)
  void append(const Integer& b) {
    Integer np = p_prev + b * p_cur;
    Integer nq = q_prev + b * q_cur;
    p_prev = std::move(p_cur);
    p_cur = std::move(np);
    q_prev = std::move(q_cur);
    q_cur = std::move(nq);
    ++length;
  }

  friend bool operator==(const Mat2& x, const Mat2& y) {
    return x.p_prev == y.p_prev && x.p_cur == y.p_cur && x.q_prev == y.q_prev &&
           x.q_cur == y.q_cur && x.length == y.length;
  }
};

inline Mat2 cf_to_matrix(const CfExpansion& cf) {
  require_positive_quotients(cf);
  Mat2 m;
  for (const Integer& b : cf) m.append(b);
  return m;
}

// Trace of the matrix product, q_s + p_{s-1} (the cyclical continuant).
inline Integer cyclic_trace(const CfExpansion& cf) {
  if (cf.empty()) throw std::invalid_argument("cyclic_trace: expansion must be nonempty");
  Mat2 m = cf_to_matrix(cf);
  return m.q_cur + m.p_prev;
}

// Every rational has exactly two expansions: [.., b_s] with b_s >= 2 and
// [.., b_s - 1, 1]. twin_of flips between them.
inline CfExpansion twin_of(const CfExpansion& cf) {
  require_positive_quotients(cf);
  if (cf.empty() || (cf.size() == 1 && cf[0] == 1))
    throw std::invalid_argument("twin_of: expansion has no twin");
  CfExpansion out = cf;
  if (out.back() >= 2) {
    out.back() -= 1;
    out.emplace_back(1);
  } else {
    out.pop_back();
    out.back() += 1;
  }
  return out;
}

// Membership rule for "all partial quotients bounded by M". The canonical rule
// inspects only the b_s >= 2 expansion; either_twin also accepts the boundary
// case b_s = M + 1, whose twin [.., M, 1] stays within the bound.
enum class MembershipRule { canonical, either_twin };

inline bool quotients_bounded(const Fraction& f, const Integer& M, MembershipRule rule) {
  if (M < 1) throw std::invalid_argument("quotients_bounded: M must be >= 1");
  if (f.is_zero() || f.is_one()) return true;
  CfExpansion cf = expand(f);
  for (std::size_t i = 0; i + 1 < cf.size(); ++i)
    if (cf[i] > M) return false;
  if (cf.back() <= M) return true;
  return rule == MembershipRule::either_twin && cf.back() == M + 1;
}

inline std::string cf_to_string(const CfExpansion& cf) {
  std::ostringstream os;
  os << "[0";
  for (std::size_t i = 0; i < cf.size(); ++i) os << (i == 0 ? ";" : ",") << cf[i];
  os << "]";
  return os.str();
}

}  // namespace zlab
