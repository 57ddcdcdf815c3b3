// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "zlab/sl2_group.hpp"
#include "zlab/zaremba.hpp"

#include <cmath>
#include <limits>
#include <optional>
#include <queue>
#include <vector>

namespace zlab {

// A witness fraction a/q with q = 0 (mod p), gcd(a, q) = 1 and every
// canonical partial quotient at most M.
struct SearchRecord {
  std::uint64_t p = 0;
  unsigned M = 0;
  Integer q, a;
  CfExpansion cf;
  double exponent = 0.0;  // log q / log p
};

struct SearchStats {
  std::uint64_t nodes_explored = 0;
  Integer cap;
  bool cap_exhausted = false;
};

struct SearchResult {
  std::optional<SearchRecord> record;
  SearchStats stats;
};

namespace detail {

struct SearchNode {
  Integer q_cur, q_prev;  // continuant pair of the quotient prefix
  Integer a_cur, a_prev;  // numerator pair
  std::vector<unsigned> quots;
};

// best-first order: smallest denominator, then lexicographically smallest
// quotient sequence (priority_queue pops the *largest*, so invert)
struct SearchNodeAfter {
  bool operator()(const SearchNode& x, const SearchNode& y) const {
    if (x.q_cur != y.q_cur) return x.q_cur > y.q_cur;
    return std::lexicographical_compare(y.quots.begin(), y.quots.end(), x.quots.begin(),
                                        x.quots.end());
  }
};

}  // namespace detail

// Minimal q <= cap with q = 0 (mod p) such that some a coprime to q has all
// canonical partial quotients <= M. Best-first on the exact denominator makes
// the first hit minimal; among equal denominators the smallest numerator
// wins. Denominators are tracked exactly, membership is decided mod p.
inline SearchResult min_modular_denominator(std::uint64_t p, unsigned M,
                                            std::optional<Integer> cap_opt = {}) {
  if (!is_prime(p)) throw std::invalid_argument("min_modular_denominator: p must be prime");
  if (M < 1) throw std::invalid_argument("min_modular_denominator: M must be >= 1");
  const Integer cap = cap_opt ? *cap_opt : boost::multiprecision::pow(Integer(p), 4);

  SearchResult out;
  out.stats.cap = cap;

  std::priority_queue<detail::SearchNode, std::vector<detail::SearchNode>,
                      detail::SearchNodeAfter>
      frontier;
  frontier.push(detail::SearchNode{Integer(1), Integer(0), Integer(0), Integer(1), {}});

  const auto admissible = [&](const detail::SearchNode& n) {
    return !n.quots.empty() && n.quots.back() >= 2 && n.q_cur % p == 0;
  };
  const auto push_children = [&](const detail::SearchNode& n) {
    for (unsigned b = 1; b <= M; ++b) {
      Integer q = b * n.q_cur + n.q_prev;
      if (q > cap) break;
      detail::SearchNode child{std::move(q), n.q_cur, b * n.a_cur + n.a_prev, n.a_cur, n.quots};
      child.quots.push_back(b);
      frontier.push(std::move(child));
    }
  };

  while (!frontier.empty()) {
    detail::SearchNode node = frontier.top();
    frontier.pop();
    ++out.stats.nodes_explored;
    if (!admissible(node)) {
      push_children(node);
      continue;
    }
    // drain the remaining nodes with the same denominator; every candidate at
    // this q is already enqueued because denominators grow strictly along
    // tree edges
    detail::SearchNode best = node;
    while (!frontier.empty() && frontier.top().q_cur == node.q_cur) {
      detail::SearchNode other = frontier.top();
      frontier.pop();
      ++out.stats.nodes_explored;
      if (admissible(other) && other.a_cur < best.a_cur) best = std::move(other);
    }
    SearchRecord rec;
    rec.p = p;
    rec.M = M;
    rec.q = best.q_cur;
    rec.a = best.a_cur;
    rec.cf.reserve(best.quots.size());
    for (unsigned b : best.quots) rec.cf.emplace_back(b);
    rec.exponent = std::log(to_double(rec.q)) / std::log(static_cast<double>(p));
    out.record = std::move(rec);
    return out;
  }
  out.stats.cap_exhausted = true;
  return out;
}

struct ExponentRow {
  std::uint64_t p = 0;
  SearchResult result;
};

struct ExponentTable {
  std::vector<ExponentRow> rows;  // sorted by p
  double max_exponent = 0.0;
  bool all_found = true;
};

inline ExponentTable exponent_table(std::vector<std::uint64_t> primes, unsigned M,
                                    std::optional<Integer> cap = {}) {
  for (std::uint64_t p : primes)
    if (!is_prime(p)) throw std::invalid_argument("exponent_table: every entry must be prime");
  std::sort(primes.begin(), primes.end());
  primes.erase(std::unique(primes.begin(), primes.end()), primes.end());
  ExponentTable out;
  out.rows.reserve(primes.size());
  for (std::uint64_t p : primes) {
    ExponentRow row;
    row.p = p;
    row.result = min_modular_denominator(p, M, cap);
    if (row.result.record)
      out.max_exponent = std::max(out.max_exponent, row.result.record->exponent);
    else
      out.all_found = false;
    out.rows.push_back(std::move(row));
  }
  return out;
}

inline std::vector<std::uint64_t> primes_up_to(std::uint64_t n) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t p = 2; p <= n; ++p)
    if (is_prime(p)) out.push_back(p);
  return out;
}

// Minimal n <= n_max with A^n meeting the standard Borel subgroup, where A is
// the even-parity matrix set of F_M(p-1) reduced mod p. The witness product
// is refactored over A, its quotient sequences are concatenated, and the
// continuant q_{S-1} of the concatenation is checked to be 0 mod p exactly;
// u/v = p_{S-1}/q_{S-1} is the reconstructed fraction with v = 0 (mod p).
struct PowerIntersectResult {
  enum class Status { found, empty_base, not_found };
  Status status = Status::not_found;
  unsigned n = 0;
  std::optional<ModMat2> witness;
  std::vector<std::vector<unsigned>> factor_quotients;
  CfExpansion concatenated;
  Integer u, v;      // p_{S-1}, q_{S-1} of the concatenated expansion
  Integer q_full;    // q_S of the concatenated expansion
  std::vector<std::size_t> power_sizes;
};

inline PowerIntersectResult power_intersect_search(Residue p, unsigned M, unsigned n_max,
                                                   const ProductOptions& opts = {}) {
  require_modulus(p);
  if (!is_prime(p)) throw std::invalid_argument("power_intersect_search: p must be prime");
  if (n_max < 1) throw std::invalid_argument("power_intersect_search: n_max must be >= 1");
  const ParitySplit split = split_parity(M, Integer(p) - 1, p);
  PowerIntersectResult out;
  if (split.even.empty()) {
    out.status = PowerIntersectResult::Status::empty_base;
    return out;
  }

  std::vector<GroupSet> powers{split.even};
  for (unsigned n = 1; n <= n_max; ++n) {
    if (n > 1) powers.push_back(product_set(powers.back(), split.even, opts));
    out.power_sizes.push_back(powers.back().size());
    const std::optional<ModMat2> hit = first_standard_borel_element(powers.back());
    if (!hit) continue;

    out.status = PowerIntersectResult::Status::found;
    out.n = n;
    out.witness = *hit;
    const std::vector<ModMat2> factors = factor_through_powers(powers, *hit);
    for (const ModMat2& f : factors) {
      // first annotated expansion reducing to this factor (members are in
      // traversal order, so the choice is deterministic)
      const AnnotatedMatrix* found = nullptr;
      for (const AnnotatedMatrix& m : split.even_members)
        if (m.reduced == f) {
          found = &m;
          break;
        }
      if (!found) throw std::logic_error("power_intersect_search: factor lost its expansion");
      out.factor_quotients.push_back(found->quotients);
      for (unsigned b : found->quotients) out.concatenated.emplace_back(b);
    }
    out.q_full = continuant(out.concatenated.begin(), out.concatenated.end());
    out.v = continuant(out.concatenated.begin(), std::prev(out.concatenated.end()));
    out.u = out.concatenated.size() >= 2
                ? continuant(std::next(out.concatenated.begin()), std::prev(out.concatenated.end()))
                : Integer(1);
    if (out.v % p != 0)
      throw std::logic_error("power_intersect_search: witness continuant not divisible by p");
    return out;
  }
  out.status = PowerIntersectResult::Status::not_found;
  return out;
}

// Closed-form n-bounds in terms of w = w_M and the tripling ratio exponent
// alpha, together with the optimal alpha solving 18 a^2 + 19 a - 20 = 0.
struct BoundEvaluation {
  double w = 0.0, alpha = 0.0;
  double n1 = 0.0, n2 = 0.0;
  bool n1_finite = false, n2_finite = false;
  double alpha_star = 0.0;  // (-19 + sqrt(1801)) / 36
};

inline double bound_alpha_star() { return (std::sqrt(1801.0) - 19.0) / 36.0; }

inline BoundEvaluation evaluate_n_bounds(double w, double alpha) {
  if (!(w > 0.0 && w <= 1.0)) throw std::invalid_argument("evaluate_n_bounds: w must be in (0, 1]");
  if (!(alpha >= 0.0 && alpha <= 1.0))
    throw std::invalid_argument("evaluate_n_bounds: alpha must be in [0, 1]");
  BoundEvaluation out;
  out.w = w;
  out.alpha = alpha;
  out.alpha_star = bound_alpha_star();
  const double d1 = w * (14.0 + 6.0 * alpha) - 13.0 - 6.0 * alpha;
  out.n1_finite = d1 > 0.0;
  out.n1 = out.n1_finite ? (w * (28.0 + 12.0 * alpha) - 6.0) / d1
                         : std::numeric_limits<double>::infinity();
  const double d2 = w * (10.0 + 10.0 * alpha) - 10.0 - 9.0 * alpha;
  out.n2_finite = d2 > 0.0;
  out.n2 = out.n2_finite ? (2.0 / 3.0) * (w * (20.0 + 20.0 * alpha) - 6.0 * alpha) / d2
                         : std::numeric_limits<double>::infinity();
  return out;
}

}  // namespace zlab
