// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "zlab/group_set.hpp"
#include "zlab/rational_matrix.hpp"
#include "zlab/sl2_group.hpp"

#include <cmath>
#include <limits>
#include <optional>
#include <utility>
#include <vector>

namespace zlab {

// Image of each projective point under g, as indices into [0, q].
inline std::vector<Residue> perm_of(const ModMat2& g) {
  std::vector<Residue> img(proj_line_size(g.p));
  for (Residue idx = 0; idx <= g.p; ++idx) img[idx] = apply(g, ProjPoint{idx}).index;
  return img;
}

// Fourier transform sum_g f(g) P(g) on the permutation representation of the
// projective line. P = trivial + Steinberg, so the trivial block is the total
// mass and the Steinberg block is recovered by projecting with I - J/(q+1).
struct FourierImage {
  Residue q = 0;
  RationalMatrix mat;  // (q+1) x (q+1)
  Rational total;      // sum_g f(g), the trivial-representation scalar
};

inline FourierImage fourier(Residue q, const std::vector<std::pair<ModMat2, Rational>>& f) {
  require_modulus(q);
  FourierImage out;
  out.q = q;
  out.mat = RationalMatrix(proj_line_size(q), proj_line_size(q));
  for (const auto& [g, coeff] : f) {
    if (g.p != q) throw std::invalid_argument("fourier: modulus mismatch");
    const std::vector<Residue> img = perm_of(g);
    for (Residue idx = 0; idx <= q; ++idx) out.mat.at(img[idx], idx) += coeff;
    out.total += coeff;
  }
  return out;
}

inline FourierImage fourier_indicator(const GroupSet& a) {
  std::vector<std::pair<ModMat2, Rational>> f;
  f.reserve(a.size());
  for (const ModMat2& g : a) f.emplace_back(g, Rational(1));
  return fourier(a.modulus(), std::move(f));
}

// Every column of sum f(g) P(g) sums to the total mass.
inline bool column_sums_equal_total(const FourierImage& img) {
  for (std::size_t j = 0; j < img.mat.cols(); ++j) {
    Rational s = 0;
    for (std::size_t i = 0; i < img.mat.rows(); ++i) s += img.mat.at(i, j);
    if (s != img.total) return false;
  }
  return true;
}

// Q M Q with Q = I - J/(q+1): the Steinberg component, written in the
// ambient q+1 coordinates (the padding does not change HS or operator norms).
inline RationalMatrix steinberg_block(const FourierImage& img) {
  const std::size_t n = img.mat.rows();
  RationalMatrix proj(n, n);
  const Rational off = Rational(-1, static_cast<long>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) proj.at(i, j) = (i == j ? 1 + off : off);
  return proj * img.mat * proj;
}

// Exact certificates for the Borel indicator function: its Fourier transform
// is |B| on the trivial representation, a rank-one block of HS norm exactly
// |B| on the Steinberg representation, and zero everywhere else -- which
// forces the Parseval split |B| = |B|^2 (1+q) / |G| and Wiener norm 1.
struct BorelCertificate {
  Residue q = 0;
  Integer borel_order;           // q(q-1)
  Rational steinberg_hs_sq;      // must equal |B|^2
  std::size_t steinberg_rank = 0;
  Rational parseval_lhs, parseval_rhs;
  Rational wiener_contrib;
  bool hs_exact = false, rank_one = false, parseval_exact = false, wiener_exact = false;
  bool ok = false;
  double hs_norm = 0.0, op_norm = 0.0;
};

inline BorelCertificate borel_certificates(Residue q) {
  require_modulus(q);
  if (q < 3 || q % 2 == 0 || !is_prime(q))
    throw std::invalid_argument("borel_certificates: q must be an odd prime >= 3");
  BorelCertificate out;
  out.q = q;
  out.borel_order = Integer(q) * (q - 1);
  const GroupSet borel = standard_borel_set(q);
  const FourierImage img = fourier_indicator(borel);
  const RationalMatrix st = steinberg_block(img);

  out.steinberg_hs_sq = hs_norm_sq(st);
  out.steinberg_rank = rank(st);
  out.hs_exact = out.steinberg_hs_sq == Rational(out.borel_order * out.borel_order);
  out.rank_one = out.steinberg_rank == 1;

  // Parseval: sum_g |B(g)|^2 = |B| must match (|B|^2 + q * ||St||^2) / |G|,
  // computed from the actual Steinberg norm; equality certifies that every
  // other nontrivial representation vanishes.
  const Integer order = Integer(group_order(q));
  out.parseval_lhs = Rational(out.borel_order);
  out.parseval_rhs = (img.total * img.total + Rational(q) * out.steinberg_hs_sq) / order;
  out.parseval_exact = out.parseval_lhs == out.parseval_rhs;

  // rank one makes operator and HS norms coincide, so the Wiener norm is
  // (|B| + q |B|) / |G| once the HS value is certified
  out.wiener_exact = out.hs_exact && out.rank_one;
  out.wiener_contrib = out.wiener_exact
                           ? Rational(out.borel_order + Integer(q) * out.borel_order, order)
                           : Rational(0);
  out.ok = out.hs_exact && out.rank_one && out.parseval_exact && out.wiener_exact &&
           out.wiener_contrib == 1;
  out.hs_norm = std::sqrt(to_double(out.steinberg_hs_sq));
  out.op_norm = out.rank_one ? out.hs_norm : std::numeric_limits<double>::quiet_NaN();
  return out;
}

// Dimension inventory of the q+3 nontrivial irreducible representations plus
// the trivial one: sum of squared dimensions must equal |SL_2(F_q)| = q^3 - q.
struct DimensionInventory {
  Residue q = 0;
  Integer sum_of_squares;
  Integer order;
  std::size_t nontrivial_count = 0;
  bool counts_ok = false;
  bool ok = false;
};

inline DimensionInventory dimension_inventory(Residue q) {
  require_modulus(q);
  if (q < 3 || q % 2 == 0 || !is_prime(q))
    throw std::invalid_argument("dimension_inventory: q must be an odd prime >= 3");
  DimensionInventory out;
  out.q = q;
  const Integer Q(q);
  out.sum_of_squares = 1                                        // trivial
                       + (Q - 3) / 2 * (Q + 1) * (Q + 1)        // principal series
                       + Q * Q                                  // Steinberg
                       + 2 * ((Q + 1) / 2) * ((Q + 1) / 2)      // split pair
                       + 2 * ((Q - 1) / 2) * ((Q - 1) / 2)      // discrete pair
                       + (Q - 1) / 2 * (Q - 1) * (Q - 1);       // discrete series
  out.order = Q * Q * Q - Q;
  out.nontrivial_count =
      static_cast<std::size_t>((q - 3) / 2 + 1 + 2 + 2 + (q - 1) / 2);
  out.counts_ok = out.nontrivial_count == static_cast<std::size_t>(q) + 3;
  out.ok = out.sum_of_squares == out.order && out.counts_ok;
  return out;
}

// Smallest nontrivial representation dimension, (q-1)/2.
inline Integer min_nontrivial_dimension(Residue q) { return (Integer(q) - 1) / 2; }

// Spectral-gap certificate for the indicator of A: the Steinberg operator
// norm is certified strictly below sqrt(|A| (q^3 - q) / d_min), and the
// resulting mixing lower bound |A|^n/|G| - bound^{n-2} |A| predicts A^n = G
// when positive, which is then cross-checked by direct set powering.
struct SpectralGapReport {
  Residue q = 0;
  std::size_t a_size = 0;
  unsigned n = 0;
  double op_norm = 0.0;          // bisected to ~1e-9 relative
  double bound = 0.0;            // sqrt(|A| (q^3-q) / d_min)
  bool strictly_below = false;   // certified exactly
  double mixing_lower = 0.0;
  bool mixing_positive = false;  // exact when n is even, else by long double
  std::optional<bool> power_equals_group;
};

inline SpectralGapReport spectral_gap_check(const GroupSet& a, unsigned n,
                                            bool confirm_by_powering = true) {
  if (a.empty()) throw std::invalid_argument("spectral_gap_check: set must be nonempty");
  if (n < 3) throw std::invalid_argument("spectral_gap_check: n must be >= 3");
  require_special_linear(a);
  const Residue q = a.modulus();
  SpectralGapReport out;
  out.q = q;
  out.a_size = a.size();
  out.n = n;

  const RationalMatrix st = steinberg_block(fourier_indicator(a));
  const RationalMatrix gram = st.transpose() * st;
  const Rational bound_sq =
      Rational(Integer(a.size()) * Integer(group_order(q)), min_nontrivial_dimension(q));
  out.strictly_below = lambda_max_below(gram, bound_sq);
  const auto [lo, hi] = lambda_max_bracket(gram);
  out.op_norm = std::sqrt(to_double((lo + hi) / 2));
  out.bound = std::sqrt(to_double(bound_sq));

  const Integer order(group_order(q));
  if (n % 2 == 0) {
    const Rational lower =
        Rational(boost::multiprecision::pow(Integer(a.size()), n), order) -
        rational_pow(bound_sq, (n - 2) / 2) * Integer(a.size());
    out.mixing_positive = lower > 0;
    out.mixing_lower = to_double(lower);
  } else {
    const long double lower =
        std::pow(static_cast<long double>(a.size()), static_cast<long double>(n)) /
            static_cast<long double>(group_order(q)) -
        std::pow(static_cast<long double>(to_double(bound_sq)),
                 (static_cast<long double>(n) - 2) / 2) *
            static_cast<long double>(a.size());
    out.mixing_positive = lower > 0;
    out.mixing_lower = static_cast<double>(lower);
  }

  if (out.mixing_positive && confirm_by_powering)
    out.power_equals_group = power(a, n).size() == group_order(q);
  return out;
}

}  // namespace zlab
