// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "zlab/group_set.hpp"

#include <cmath>
#include <cstdint>
#include <unordered_map>
#include <vector>

namespace zlab {

// Several checks below intersect with Borel subgroups of SL_2 or use trace
// fibers as conjugacy classes, which only makes sense for determinant-one
// sets; mixed-parity sets are rejected up front.
inline void require_special_linear(const GroupSet& a) {
  for (const ModMat2& g : a)
    if (det(g) != 1) throw std::invalid_argument("set must lie in SL_2 (determinant one)");
}

// Common energy E(A,B) = #{(a,a1,b,b1) : a^{-1} b = a1^{-1} b1}
//                      = sum_x r_{A^{-1}B}(x)^2.
struct EnergyReport {
  std::uint64_t value = 0;
  std::size_t left_quotient_size = 0;  // |A^{-1} B|
  bool cauchy_schwarz_ok = false;      // E(A,B) |A^{-1}B| >= |A|^2 |B|^2
};

inline EnergyReport energy(const GroupSet& a, const GroupSet& b) {
  if (a.modulus() != b.modulus()) throw std::invalid_argument("energy: modulus mismatch");
  std::unordered_map<std::uint64_t, std::uint64_t> reps;
  reps.reserve(a.size() * b.size() / 4 + 16);
  for (const ModMat2& x : a) {
    const ModMat2 xi = inverse(x);
    for (const ModMat2& y : b) ++reps[pack(mul(xi, y))];
  }
  EnergyReport out;
  out.left_quotient_size = reps.size();
  for (const auto& [key, r] : reps) out.value += r * r;
  const Integer lhs = Integer(out.value) * out.left_quotient_size;
  const Integer rhs = Integer(a.size()) * a.size() * b.size() * b.size();
  out.cauchy_schwarz_ok = lhs >= rhs;
  return out;
}

// Multiplicities r_{BgB}(x) for the standard Borel subgroup and any g outside
// it. Every x outside B is hit, with multiplicity at most p - 1.
struct DoubleCosetReport {
  Residue p = 0;
  std::size_t checked_g = 0;   // all g outside B
  Residue max_r = 0;           // max over g and x of r_{BgB}(x)
  Residue min_max_r = 0;       // min over g of max_x r_{BgB}(x)
  bool bound_ok = false;       // max_r <= p - 1
  bool complement_ok = false;  // BgB = G \ B for every g
};

inline DoubleCosetReport verify_double_coset(Residue p) {
  require_modulus(p);
  if (p < 3) throw std::invalid_argument("verify_double_coset: p must be >= 3");
  const GroupSet borel = standard_borel_set(p);
  const GroupSet whole = full_group(p);
  const std::uint64_t coset_size = group_order(p) - borel.size();  // p^3 - p^2
  const std::size_t packed_span = static_cast<std::size_t>(p) * p * p * p;
  std::vector<std::uint32_t> count(packed_span, 0);
  std::vector<std::uint32_t> stamp(packed_span, 0);
  std::uint32_t epoch = 0;

  DoubleCosetReport out;
  out.p = p;
  out.bound_ok = true;
  out.complement_ok = true;
  out.min_max_r = p;
  for (const ModMat2& g : whole) {
    if (in_standard_borel(g)) continue;
    ++epoch;
    ++out.checked_g;
    Residue local_max = 0;
    std::uint64_t support = 0;
    for (const ModMat2& b1 : borel) {
      const ModMat2 left = mul(b1, g);
      for (const ModMat2& b2 : borel) {
        const std::uint64_t key = pack(mul(left, b2));
        if (stamp[key] != epoch) {
          stamp[key] = epoch;
          count[key] = 0;
          ++support;
        }
        const std::uint32_t r = ++count[key];
        if (r > local_max) local_max = static_cast<Residue>(r);
      }
    }
    if (local_max > out.max_r) out.max_r = local_max;
    if (local_max < out.min_max_r) out.min_max_r = local_max;
    if (local_max > p - 1) out.bound_ok = false;
    bool complement = support == coset_size;
    if (complement)
      for (const ModMat2& b : borel)
        if (stamp[pack(b)] == epoch) {
          complement = false;
          break;
        }
    if (!complement) out.complement_ok = false;
  }
  return out;
}

// max_x r_{BgB}(x) for one g; rejects g inside the Borel subgroup.
inline Residue double_coset_max_multiplicity(const ModMat2& g) {
  if (in_standard_borel(g))
    throw std::invalid_argument("double_coset_max_multiplicity: g must lie outside B");
  const GroupSet borel = standard_borel_set(g.p);
  std::unordered_map<std::uint64_t, std::uint32_t> count;
  count.reserve(borel.size() * 4);
  Residue best = 0;
  for (const ModMat2& b1 : borel) {
    const ModMat2 left = mul(b1, g);
    for (const ModMat2& b2 : borel) {
      const std::uint32_t r = ++count[pack(mul(left, b2))];
      if (r > best) best = static_cast<Residue>(r);
    }
  }
  return best;
}

// Growth ratios K = |AAA|/|A| and K~ = |AA|/|A|, kept exact.
struct TriplingReport {
  std::size_t size = 0, double_size = 0, triple_size = 0;
  Rational K, K_tilde;
};

inline TriplingReport tripling(const GroupSet& a, const ProductOptions& opts = {}) {
  if (a.empty()) throw std::invalid_argument("tripling: set must be nonempty");
  TriplingReport out;
  out.size = a.size();
  const GroupSet aa = product_set(a, a, opts);
  out.double_size = aa.size();
  out.triple_size = product_set(aa, a, opts).size();
  out.K = Rational(out.triple_size, out.size);
  out.K_tilde = Rational(out.double_size, out.size);
  return out;
}

// Intersections of A with every Borel subgroup (one per projective point),
// with its p - 1 lines l_gamma inside the standard Borel, and with every
// proper coset g B_*. The lemma bound |A cap B_*| <= 2 p K^{5/3} |A|^{1/3}
// and the coset bound K |A| >= |A cap g B_*|^2 / (p - 1) are both compared
// exactly (cubes respectively squares clear the fractional powers).
struct BorelIntersectionReport {
  Residue p = 0;
  std::size_t size = 0;
  std::size_t max_borel = 0;
  ProjPoint argmax_borel{0};
  std::vector<std::size_t> line_counts;  // gamma = 1 .. p-1, standard Borel
  double lemma_rhs = 0.0;                // 2 p K^{5/3} |A|^{1/3}
  bool lemma_ok = false;
  std::size_t max_coset = 0;
  bool remark_ok = false;
};

inline BorelIntersectionReport borel_intersections(const GroupSet& a, const Rational& K) {
  if (a.empty()) throw std::invalid_argument("borel_intersections: set must be nonempty");
  require_special_linear(a);
  const Residue p = a.modulus();
  BorelIntersectionReport out;
  out.p = p;
  out.size = a.size();

  // bucket each element by its image of every projective point: a and g lie
  // in the same left coset of stab(pt) iff a(pt) = g(pt), and a stabilizes pt
  // iff a(pt) = pt
  std::vector<std::vector<std::size_t>> hits(proj_line_size(p),
                                             std::vector<std::size_t>(proj_line_size(p), 0));
  for (const ModMat2& g : a)
    for (Residue idx = 0; idx <= p; ++idx) ++hits[idx][apply(g, ProjPoint{idx}).index];

  out.max_borel = 0;
  out.remark_ok = true;
  const Rational coset_bound = K * Integer(a.size()) * Integer(p - 1);
  for (Residue idx = 0; idx <= p; ++idx) {
    const std::size_t fixed = hits[idx][idx];
    if (fixed > out.max_borel) {
      out.max_borel = fixed;
      out.argmax_borel = ProjPoint{idx};
    }
    for (Residue img = 0; img <= p; ++img) {
      if (img == idx) continue;
      const std::size_t cnt = hits[idx][img];
      if (cnt > out.max_coset) out.max_coset = cnt;
      if (Rational(Integer(cnt) * Integer(cnt)) > coset_bound) out.remark_ok = false;
    }
  }

  out.line_counts.assign(p - 1, 0);
  for (const ModMat2& g : a)
    if (in_standard_borel(g)) ++out.line_counts[g.a - 1];

  // max^3 <= 8 p^3 K^5 |A| decides the lemma bound without roots
  const Rational lhs = Rational(Integer(out.max_borel) * out.max_borel * out.max_borel);
  const Rational rhs = Rational(8) * Integer(p) * Integer(p) * Integer(p) *
                       rational_pow(K, 5) * Integer(a.size());
  out.lemma_ok = lhs <= rhs;
  out.lemma_rhs = 2.0 * p * std::pow(to_double(K), 5.0 / 3.0) *
                  std::cbrt(static_cast<double>(a.size()));
  return out;
}

// Helfgott-map inequality: for regular g there is A_0, |A_0| >= |A|/2, with
// |A|/2 <= |Conj(g) cap A g A^{-1}| * |Centr(g) cap a_0^{-1} A| for every
// a_0 in A_0. The conjugacy class of a regular element is exactly its trace
// fiber; non-regular g is rejected rather than silently approximated.
struct HelfgottReport {
  std::size_t a_size = 0;
  Residue trace_g = 0;
  std::uint64_t conj_factor = 0;       // |Conj(g) cap A g A^{-1}|
  std::size_t a0_size = 0;
  std::uint64_t min_centr_factor = 0;  // min over a_0 of |Centr(g) cap a_0^{-1} A|
  bool a0_large_enough = false;        // 2 |A_0| >= |A|
  bool inequality_ok = false;
};

inline HelfgottReport helfgott_inequality(const GroupSet& a, const ModMat2& g) {
  if (a.empty()) throw std::invalid_argument("helfgott_inequality: set must be nonempty");
  require_special_linear(a);
  if (a.modulus() != g.p) throw std::invalid_argument("helfgott_inequality: modulus mismatch");
  if (!is_regular(g))
    throw std::domain_error("helfgott_inequality: g must be regular (trace not 0, +-2)");
  const Residue t = trace(g);
  HelfgottReport out;
  out.a_size = a.size();
  out.trace_g = t;

  std::unordered_set<std::uint64_t> conj_inter;
  conj_inter.reserve(a.size() * 2);
  for (const ModMat2& x : a) {
    const ModMat2 left = mul(x, g);
    for (const ModMat2& y : a) {
      const ModMat2 z = mul(left, inverse(y));
      if (trace(z) == t) conj_inter.insert(pack(z));
    }
  }
  out.conj_factor = conj_inter.size();

  std::unordered_map<std::uint64_t, std::uint64_t> fiber;  // value of a g a^{-1} -> count
  fiber.reserve(a.size() * 2);
  for (const ModMat2& x : a) ++fiber[pack(mul(mul(x, g), inverse(x)))];

  out.a0_size = 0;
  out.inequality_ok = true;
  out.min_centr_factor = 0;
  bool first = true;
  for (const ModMat2& x : a) {
    const std::uint64_t f = fiber[pack(mul(mul(x, g), inverse(x)))];
    if (2 * out.conj_factor * f < a.size()) continue;  // not in A_0
    ++out.a0_size;
    std::uint64_t centr = 0;
    const ModMat2 xi = inverse(x);
    for (const ModMat2& y : a)
      if (commute(mul(xi, y), g)) ++centr;
    if (first || centr < out.min_centr_factor) out.min_centr_factor = centr;
    first = false;
    if (2 * out.conj_factor * centr < a.size()) out.inequality_ok = false;
  }
  out.a0_large_enough = 2 * out.a0_size >= a.size();
  return out;
}

// Distinct traces of A, with the ratio (#traces) M^3 p / |A| that the
// cyclical-continuant lemma says stays bounded below for split-parity sets.
struct TraceSpectrumReport {
  std::size_t distinct_traces = 0;
  double ratio = 0.0;
};

inline TraceSpectrumReport trace_spectrum(const GroupSet& a, unsigned M) {
  if (a.empty()) throw std::invalid_argument("trace_spectrum: set must be nonempty");
  std::vector<bool> seen(a.modulus(), false);
  TraceSpectrumReport out;
  for (const ModMat2& g : a) {
    const Residue t = trace(g);
    if (!seen[t]) {
      seen[t] = true;
      ++out.distinct_traces;
    }
  }
  out.ratio = static_cast<double>(out.distinct_traces) * M * M * M * a.modulus() /
              static_cast<double>(a.size());
  return out;
}

// max{|AB|, |BA|} against the two sum-product comparison terms
// p^{3/2} |A|^{1/2} and |A|^2 p^{-2}; only the ratio is meaningful since the
// implicit constant is unspecified.
struct SumProductReport {
  std::size_t ab_size = 0, ba_size = 0, max_size = 0;
  double term_spectral = 0.0;  // p^{3/2} |A|^{1/2}
  double term_quadratic = 0.0; // |A|^2 / p^2
  double ratio = 0.0;          // max_size / min(term_spectral, term_quadratic)
};

inline SumProductReport borel_sumproduct_ratio(const GroupSet& a) {
  if (a.empty()) throw std::invalid_argument("borel_sumproduct_ratio: set must be nonempty");
  require_special_linear(a);
  const Residue p = a.modulus();
  const GroupSet borel = standard_borel_set(p);
  SumProductReport out;
  out.ab_size = product_set(a, borel).size();
  out.ba_size = product_set(borel, a).size();
  out.max_size = std::max(out.ab_size, out.ba_size);
  out.term_spectral = std::pow(static_cast<double>(p), 1.5) *
                      std::sqrt(static_cast<double>(a.size()));
  out.term_quadratic =
      static_cast<double>(a.size()) * a.size() / (static_cast<double>(p) * p);
  out.ratio = out.max_size / std::min(out.term_spectral, out.term_quadratic);
  return out;
}

// A^n meets the standard Borel subgroup whenever |A| >= 4 p^{2 + 4/(3n-2)}.
// The hypothesis is decided exactly via |A|^{3n-2} >= 4^{3n-2} p^{6n}.
struct PowerBorelReport {
  Residue p = 0;
  unsigned n = 0;
  double threshold = 0.0;       // 4 p^{2 + 4/(3n-2)}
  bool vacuous = false;         // threshold exceeds |G|
  bool hypothesis_met = false;  // |A| >= threshold
  bool intersect_nonempty = false;
  std::optional<ModMat2> witness;       // element of A^n cap B
  std::vector<ModMat2> factors;         // n elements of A multiplying to it
};

inline std::optional<ModMat2> first_standard_borel_element(const GroupSet& s) {
  for (const ModMat2& g : s)
    if (in_standard_borel(g)) return g;
  return std::nullopt;
}

// Recovers one factorization of target across the stored power chain;
// powers[k] must hold A^{k+1}.
inline std::vector<ModMat2> factor_through_powers(const std::vector<GroupSet>& powers,
                                                  const ModMat2& target) {
  std::vector<ModMat2> factors;
  ModMat2 rest = target;
  for (std::size_t k = powers.size(); k > 1; --k) {
    const GroupSet& base = powers.front();
    bool found = false;
    for (const ModMat2& x : base) {
      const ModMat2 tail = mul(inverse(x), rest);
      if (powers[k - 2].contains(tail)) {
        factors.push_back(x);
        rest = tail;
        found = true;
        break;
      }
    }
    if (!found) throw std::logic_error("factor_through_powers: element not in the stated power");
  }
  factors.push_back(rest);
  return factors;
}

inline PowerBorelReport power_borel_threshold(const GroupSet& a, unsigned n,
                                              const ProductOptions& opts = {}) {
  if (n < 3) throw std::invalid_argument("power_borel_threshold: n must be >= 3");
  if (a.empty()) throw std::invalid_argument("power_borel_threshold: set must be nonempty");
  require_special_linear(a);
  const Residue p = a.modulus();
  PowerBorelReport out;
  out.p = p;
  out.n = n;
  out.threshold =
      4.0 * std::pow(static_cast<double>(p), 2.0 + 4.0 / (3.0 * n - 2.0));
  out.vacuous = out.threshold > static_cast<double>(group_order(p));
  const unsigned e = 3 * n - 2;
  Integer lhs = boost::multiprecision::pow(Integer(a.size()), e);
  Integer rhs = boost::multiprecision::pow(Integer(4), e) *
                boost::multiprecision::pow(Integer(p), 6 * n);
  out.hypothesis_met = lhs >= rhs;

  std::vector<GroupSet> powers{a};
  for (unsigned k = 2; k <= n; ++k) powers.push_back(product_set(powers.back(), a, opts));
  const std::optional<ModMat2> hit = first_standard_borel_element(powers.back());
  out.intersect_nonempty = hit.has_value();
  if (hit) {
    out.witness = *hit;
    out.factors = factor_through_powers(powers, *hit);
  }
  return out;
}

}  // namespace zlab
