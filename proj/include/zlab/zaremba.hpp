// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "zlab/cont_frac.hpp"
#include "zlab/group_set.hpp"

#include <cmath>
#include <cstdint>
#include <functional>
#include <ostream>
#include <vector>

namespace zlab {

// F_M(Q): rationals u/v in [0, 1], gcd(u, v) = 1, v <= Q, admitting an
// expansion with all partial quotients <= M under the chosen rule.
struct ZarembaSet {
  unsigned M = 0;
  Integer Q;
  MembershipRule rule = MembershipRule::either_twin;
  std::vector<Fraction> members;  // ascending by value
};

// Depth-first walk of the continuant tree. Prefix nodes carry quotients in
// [1, M]; a member is a prefix extended by a final quotient b in [2, L] where
// L = M for the canonical rule and M + 1 under either_twin (the twin
// [.., b-1, 1] then stays within the bound). Each fraction is visited exactly
// once because canonical expansions are unique. Children are explored in
// increasing quotient order and the walk prunes as soon as q_s > Q, which is
// sound since continuants grow monotonically in every quotient.
//
// fn receives the canonical quotient sequence and the exact convergent matrix.
// Endpoints 0/1 and 1/1 carry no matrix and are handled by the callers.
template <typename Fn>
void for_each_bounded_fraction(unsigned M, const Integer& Q, MembershipRule rule, Fn&& fn) {
  if (M < 1) throw std::invalid_argument("F_M(Q): M must be >= 1");
  if (Q < 1) throw std::invalid_argument("F_M(Q): Q must be >= 1");
  const unsigned last_max = M + (rule == MembershipRule::either_twin ? 1u : 0u);
  std::vector<unsigned> quots;
  Mat2 m;
  const std::function<void()> walk = [&] {
    for (unsigned b = 1; b <= last_max; ++b) {
      Integer q = m.q_prev + b * m.q_cur;
      if (q > Q) break;
      const Mat2 saved = m;
      m.append(b);
      quots.push_back(b);
      if (b >= 2) fn(static_cast<const std::vector<unsigned>&>(quots), static_cast<const Mat2&>(m));
      if (b <= M) walk();
      quots.pop_back();
      m = saved;
    }
  };
  walk();
}

// Streaming count, 64-bit with overflow detection; includes the endpoints.
inline std::uint64_t count_fractions(unsigned M, const Integer& Q,
                                     MembershipRule rule = MembershipRule::either_twin) {
  std::uint64_t count = 2;  // 0/1 and 1/1
  for_each_bounded_fraction(M, Q, rule, [&](const std::vector<unsigned>&, const Mat2&) {
    if (++count == 0) throw std::overflow_error("count_fractions: 64-bit counter overflow");
  });
  return count;
}

inline ZarembaSet enumerate_fractions(unsigned M, const Integer& Q,
                                      MembershipRule rule = MembershipRule::either_twin,
                                      std::uint64_t max_members = 5'000'000) {
  const std::uint64_t predicted = count_fractions(M, Q, rule);
  if (predicted > max_members)
    throw std::length_error("enumerate_fractions: predicted member count exceeds the cap");
  ZarembaSet out;
  out.M = M;
  out.Q = Q;
  out.rule = rule;
  out.members.reserve(predicted);
  out.members.emplace_back(Integer(0), Integer(1));
  for_each_bounded_fraction(M, Q, rule, [&](const std::vector<unsigned>&, const Mat2& m) {
    out.members.emplace_back(m.p_cur, m.q_cur);
  });
  out.members.emplace_back(Integer(1), Integer(1));
  std::sort(out.members.begin(), out.members.end());
  return out;
}

inline void write_members_csv(const ZarembaSet& zs, std::ostream& os) {
  os << "u,v\n";
  for (const Fraction& f : zs.members) os << f.num() << ',' << f.den() << '\n';
}

// One F_M(Q) member together with its exact convergent matrix and reduction.
struct AnnotatedMatrix {
  std::vector<unsigned> quotients;
  Mat2 exact;
  ModMat2 reduced;
};

struct SplitFilters {
  bool nonzero_entries = false;  // keep only matrices with all entries nonzero mod p
  bool regular_trace = false;    // keep only matrices with trace outside {0, +-2} mod p
};

// Canonical-rule members of F_M(Q) split by the parity of the expansion
// length; the endpoints carry no matrix. The GroupSets hold the reductions
// mod p after dedup, the member lists keep one entry per fraction.
struct ParitySplit {
  GroupSet even, odd;
  std::vector<AnnotatedMatrix> even_members, odd_members;
};

inline ParitySplit split_parity(unsigned M, const Integer& Q, Residue p, SplitFilters f = {}) {
  require_modulus(p);
  std::vector<ModMat2> even_elems, odd_elems;
  ParitySplit out;
  for_each_bounded_fraction(
      M, Q, MembershipRule::canonical, [&](const std::vector<unsigned>& quots, const Mat2& m) {
        const ModMat2 red = reduce_mod(m, p);
        if (f.nonzero_entries && (red.a == 0 || red.b == 0 || red.c == 0 || red.d == 0)) return;
        if (f.regular_trace && !is_regular(red)) return;
        const bool even = m.length % 2 == 0;
        (even ? even_elems : odd_elems).push_back(red);
        (even ? out.even_members : out.odd_members).push_back(AnnotatedMatrix{quots, m, red});
      });
  out.even = GroupSet::of(p, std::move(even_elems));
  out.odd = GroupSet::of(p, std::move(odd_elems));
  return out;
}

// Least-squares fit of log |F_M(Q)| against 2 log Q; the slope estimates the
// Hausdorff dimension w_M that governs |F_M(Q)| ~ Q^{2 w_M}.
struct DimensionEstimate {
  unsigned M = 0;
  std::vector<Integer> sample_Qs;
  std::vector<std::uint64_t> counts;
  double w_hat = 0.0;
  double residual = 0.0;
  bool degenerate = false;  // all counts equal; no usable slope
};

inline DimensionEstimate estimate_dimension(unsigned M, const std::vector<Integer>& Qs,
                                            MembershipRule rule = MembershipRule::either_twin) {
  if (Qs.size() < 3) throw std::invalid_argument("estimate_dimension: need at least 3 sample points");
  for (std::size_t i = 0; i < Qs.size(); ++i) {
    if (Qs[i] < 16) throw std::invalid_argument("estimate_dimension: every Q must be >= 16");
    if (i > 0 && Qs[i] <= Qs[i - 1])
      throw std::invalid_argument("estimate_dimension: sample Qs must be strictly increasing");
  }
  DimensionEstimate out;
  out.M = M;
  out.sample_Qs = Qs;
  out.counts.reserve(Qs.size());
  for (const Integer& Q : Qs) out.counts.push_back(count_fractions(M, Q, rule));

  out.degenerate = std::all_of(out.counts.begin(), out.counts.end(),
                               [&](std::uint64_t c) { return c == out.counts.front(); });
  std::vector<double> xs(Qs.size()), ys(Qs.size());
  for (std::size_t i = 0; i < Qs.size(); ++i) {
    xs[i] = 2.0 * std::log(to_double(Qs[i]));
    ys[i] = std::log(static_cast<double>(out.counts[i]));
  }
  const double n = static_cast<double>(Qs.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < Qs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < Qs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  out.w_hat = out.degenerate ? 0.0 : sxy / sxx;
  double rss = 0;
  for (std::size_t i = 0; i < Qs.size(); ++i) {
    const double fit = my + out.w_hat * (xs[i] - mx);
    rss += (ys[i] - fit) * (ys[i] - fit);
  }
  out.residual = std::sqrt(rss / n);
  return out;
}

inline std::vector<Integer> dyadic_qs(unsigned lo_exp, unsigned hi_exp) {
  if (lo_exp > hi_exp) throw std::invalid_argument("dyadic_qs: empty exponent range");
  std::vector<Integer> out;
  for (unsigned e = lo_exp; e <= hi_exp; ++e) out.push_back(Integer(1) << e);
  return out;
}

}  // namespace zlab
