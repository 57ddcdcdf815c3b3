// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "zlab/cont_frac.hpp"
#include "zlab/numeric.hpp"

#include <cstdint>
#include <stdexcept>

namespace zlab {

using Residue = std::uint32_t;

// Moduli stay below 2^16 so a packed element fits in one 64-bit word.
inline constexpr Residue kMaxModulus = 65521;

inline void require_modulus(Residue p) {
  if (p < 2 || p > kMaxModulus) throw std::invalid_argument("modulus out of supported range");
}

inline Residue mod_reduce(const Integer& x, Residue p) {
  Integer r = x % p;
  if (r < 0) r += p;
  return r.convert_to<Residue>();
}

inline Residue mod_inv(Residue a, Residue p) {
  if (a == 0) throw std::domain_error("mod_inv: zero is not invertible");
  std::int64_t t = 0, new_t = 1;
  std::int64_t r = p, new_r = a % p;
  while (new_r != 0) {
    const std::int64_t q = r / new_r;
    t -= q * new_t;
    std::swap(t, new_t);
    r -= q * new_r;
    std::swap(r, new_r);
  }
  if (r != 1) throw std::domain_error("mod_inv: argument shares a factor with the modulus");
  if (t < 0) t += p;
  return static_cast<Residue>(t);
}

// Unimodular 2x2 matrix over F_p: entries reduced mod p, det = +-1 (mod p).
// Continued-fraction matrices of odd length have det -1, so the type admits
// both signs; the SL_2 constructors below always produce det +1.
struct ModMat2 {
  Residue a, b, c, d;
  Residue p;

  friend bool operator==(const ModMat2&, const ModMat2&) = default;
};

inline Residue det(const ModMat2& g) {
  const std::uint64_t ad = std::uint64_t{g.a} * g.d % g.p;
  const std::uint64_t bc = std::uint64_t{g.b} * g.c % g.p;
  return static_cast<Residue>((ad + g.p - bc) % g.p);
}

inline bool is_unimodular(const ModMat2& g) {
  const Residue dt = det(g);
  return dt == 1 % g.p || dt == (g.p - 1) % g.p;
}

inline ModMat2 mat_identity(Residue p) {
  require_modulus(p);
  return ModMat2{1 % p, 0, 0, 1 % p, p};
}

inline ModMat2 make_mat(const Integer& a, const Integer& b, const Integer& c, const Integer& d,
                        Residue p) {
  require_modulus(p);
  ModMat2 g{mod_reduce(a, p), mod_reduce(b, p), mod_reduce(c, p), mod_reduce(d, p), p};
  if (!is_unimodular(g)) throw std::invalid_argument("make_mat: determinant must be +-1 mod p");
  return g;
}

// Reduction of a continued-fraction convergent matrix (p_{s-1} p_s | q_{s-1} q_s).
inline ModMat2 reduce_mod(const Mat2& m, Residue p) {
  return make_mat(m.p_prev, m.p_cur, m.q_prev, m.q_cur, p);
}

inline void require_same_modulus(const ModMat2& g, const ModMat2& h) {
  if (g.p != h.p) throw std::invalid_argument("modulus mismatch");
}

inline ModMat2 mul(const ModMat2& g, const ModMat2& h) {
  require_same_modulus(g, h);
  const std::uint64_t p = g.p;
  return ModMat2{
      static_cast<Residue>((std::uint64_t{g.a} * h.a + std::uint64_t{g.b} * h.c) % p),
      static_cast<Residue>((std::uint64_t{g.a} * h.b + std::uint64_t{g.b} * h.d) % p),
      static_cast<Residue>((std::uint64_t{g.c} * h.a + std::uint64_t{g.d} * h.c) % p),
      static_cast<Residue>((std::uint64_t{g.c} * h.b + std::uint64_t{g.d} * h.d) % p),
      g.p};
}

inline ModMat2 inverse(const ModMat2& g) {
  const Residue p = g.p;
  const ModMat2 adj{g.d, static_cast<Residue>((p - g.b) % p), static_cast<Residue>((p - g.c) % p),
                    g.a, p};
  if (det(g) == 1 % p) return adj;
  // det -1: the inverse is the negated adjugate
  return ModMat2{static_cast<Residue>((p - adj.a) % p), static_cast<Residue>((p - adj.b) % p),
                 static_cast<Residue>((p - adj.c) % p), static_cast<Residue>((p - adj.d) % p), p};
}

inline Residue trace(const ModMat2& g) {
  return static_cast<Residue>((std::uint64_t{g.a} + g.d) % g.p);
}

inline bool is_identity(const ModMat2& g) { return g == mat_identity(g.p); }

// Regular elements have trace outside {0, 2, -2}.
inline bool is_regular(const ModMat2& g) {
  const Residue t = trace(g);
  return t != 0 && t != 2 % g.p && t != (g.p - 2) % g.p;
}

inline bool commute(const ModMat2& g, const ModMat2& h) { return mul(g, h) == mul(h, g); }

inline std::uint64_t pack(const ModMat2& g) {
  const std::uint64_t p = g.p;
  return ((std::uint64_t{g.a} * p + g.b) * p + g.c) * p + g.d;
}

inline bool pack_less(const ModMat2& x, const ModMat2& y) { return pack(x) < pack(y); }

// Projective line over F_p: index t in [0, p) is the point (t : 1), index p
// is (1 : 0). There are exactly p + 1 points.
struct ProjPoint {
  Residue index;

  friend bool operator==(const ProjPoint&, const ProjPoint&) = default;
};

inline ProjPoint proj_infinity(Residue p) { return ProjPoint{p}; }
inline std::size_t proj_line_size(Residue p) { return std::size_t{p} + 1; }

// Fractional-linear action on canonical representatives; bijective for each g.
inline ProjPoint apply(const ModMat2& g, ProjPoint pt) {
  if (pt.index > g.p) throw std::invalid_argument("apply: point index out of range");
  const std::uint64_t p = g.p;
  std::uint64_t x, y;
  if (pt.index == g.p) {
    x = 1;
    y = 0;
  } else {
    x = pt.index;
    y = 1;
  }
  const Residue nx = static_cast<Residue>((std::uint64_t{g.a} * x + std::uint64_t{g.b} * y) % p);
  const Residue ny = static_cast<Residue>((std::uint64_t{g.c} * x + std::uint64_t{g.d} * y) % p);
  if (ny == 0) return proj_infinity(g.p);
  return ProjPoint{static_cast<Residue>(std::uint64_t{nx} * mod_inv(ny, g.p) % p)};
}

// A Borel subgroup is the stabilizer of one projective point; the standard
// one (upper-triangular matrices) fixes (1 : 0).
struct BorelSpec {
  Residue p;
  ProjPoint line;

  friend bool operator==(const BorelSpec&, const BorelSpec&) = default;
};

inline BorelSpec standard_borel(Residue p) {
  require_modulus(p);
  return BorelSpec{p, proj_infinity(p)};
}

inline bool in_borel(const ModMat2& g, const BorelSpec& spec) {
  if (g.p != spec.p) throw std::invalid_argument("modulus mismatch");
  return apply(g, spec.line) == spec.line;
}

inline bool in_standard_borel(const ModMat2& g) { return g.c == 0; }
inline bool in_unipotent(const ModMat2& g) { return g.c == 0 && g.a == 1 % g.p && g.d == 1 % g.p; }
inline bool in_diagonal(const ModMat2& g) { return g.b == 0 && g.c == 0; }

}  // namespace zlab
