// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "zlab/mod_mat2.hpp"

#include <algorithm>
#include <optional>
#include <stdexcept>
#include <unordered_set>
#include <vector>

namespace zlab {

inline std::uint64_t group_order(Residue p) {
  const std::uint64_t q = p;
  return q * q * q - q;
}

// Deduplicated finite subset of the unimodular 2x2 matrices over F_p.
// Elements are kept sorted by their packed key, so iteration order, equality
// and set products are all deterministic.
class GroupSet {
 public:
  GroupSet() : p_(0) {}
  explicit GroupSet(Residue p) : p_(p) { require_modulus(p); }

  static GroupSet of(Residue p, std::vector<ModMat2> elems) {
    GroupSet s(p);
    for (const ModMat2& g : elems)
      if (g.p != p) throw std::invalid_argument("GroupSet: modulus mismatch");
    std::sort(elems.begin(), elems.end(), pack_less);
    elems.erase(std::unique(elems.begin(), elems.end()), elems.end());
    s.elems_ = std::move(elems);
    return s;
  }

  Residue modulus() const { return p_; }
  std::size_t size() const { return elems_.size(); }
  bool empty() const { return elems_.empty(); }

  const std::vector<ModMat2>& elements() const { return elems_; }
  auto begin() const { return elems_.begin(); }
  auto end() const { return elems_.end(); }

  bool contains(const ModMat2& g) const {
    auto it = std::lower_bound(elems_.begin(), elems_.end(), g, pack_less);
    return it != elems_.end() && *it == g;
  }

  friend bool operator==(const GroupSet& x, const GroupSet& y) {
    return x.p_ == y.p_ && x.elems_ == y.elems_;
  }

 private:
  Residue p_;
  std::vector<ModMat2> elems_;
};

struct ProductOptions {
  // throw once the product grows past this many elements
  std::optional<std::size_t> max_result;
  // products are subsets of the ambient group, so once every element has been
  // seen the remaining pairs cannot add anything
  bool stop_at_full_group = true;
};

struct SaturationGuardError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline GroupSet product_set(const GroupSet& x, const GroupSet& y, const ProductOptions& opts = {}) {
  if (x.modulus() != y.modulus()) throw std::invalid_argument("product_set: modulus mismatch");
  const Residue p = x.modulus();
  const std::uint64_t order = group_order(p);
  std::unordered_set<std::uint64_t> seen;
  seen.reserve(x.size() * 2 + 16);
  std::vector<ModMat2> out;
  for (const ModMat2& g : x) {
    for (const ModMat2& h : y) {
      const ModMat2 z = mul(g, h);
      if (!seen.insert(pack(z)).second) continue;
      out.push_back(z);
      if (opts.max_result && out.size() > *opts.max_result)
        throw SaturationGuardError("product_set: result exceeds configured cap");
      if (opts.stop_at_full_group && out.size() == order) {
        std::sort(out.begin(), out.end(), pack_less);
        return GroupSet::of(p, std::move(out));
      }
    }
  }
  std::sort(out.begin(), out.end(), pack_less);
  return GroupSet::of(p, std::move(out));
}

inline GroupSet power(const GroupSet& a, unsigned n, const ProductOptions& opts = {}) {
  if (n < 1) throw std::invalid_argument("power: exponent must be >= 1");
  GroupSet result = a;
  for (unsigned i = 2; i <= n; ++i) result = product_set(result, a, opts);
  return result;
}

inline GroupSet inverse_set(const GroupSet& a) {
  std::vector<ModMat2> out;
  out.reserve(a.size());
  for (const ModMat2& g : a) out.push_back(inverse(g));
  return GroupSet::of(a.modulus(), std::move(out));
}

// All of SL_2(F_p): (p-1) p^2 matrices with a != 0, plus (p-1) p with a = 0.
inline GroupSet full_group(Residue p) {
  require_modulus(p);
  std::vector<ModMat2> out;
  out.reserve(group_order(p));
  for (Residue a = 0; a < p; ++a) {
    if (a == 0) {
      for (Residue b = 1; b < p; ++b) {
        const Residue c = static_cast<Residue>((p - mod_inv(b, p)) % p);
        for (Residue d = 0; d < p; ++d) out.push_back(ModMat2{a, b, c, d, p});
      }
    } else {
      const Residue a_inv = mod_inv(a, p);
      for (Residue b = 0; b < p; ++b)
        for (Residue c = 0; c < p; ++c) {
          const Residue d =
              static_cast<Residue>((1 + std::uint64_t{b} * c % p) % p * a_inv % p);
          out.push_back(ModMat2{a, b, c, d, p});
        }
    }
  }
  return GroupSet::of(p, std::move(out));
}

// The standard Borel subgroup {(l u | 0 l^{-1})}, |B| = p(p-1).
inline GroupSet standard_borel_set(Residue p) {
  require_modulus(p);
  std::vector<ModMat2> out;
  out.reserve(std::size_t{p} * (p - 1));
  for (Residue l = 1; l < p; ++l) {
    const Residue l_inv = mod_inv(l, p);
    for (Residue u = 0; u < p; ++u) out.push_back(ModMat2{l, u, 0, l_inv, p});
  }
  return GroupSet::of(p, std::move(out));
}

// One line of the standard Borel: l_gamma = {(gamma u | 0 gamma^{-1})}.
inline GroupSet borel_line_set(Residue p, Residue gamma) {
  require_modulus(p);
  if (gamma == 0 || gamma >= p) throw std::invalid_argument("borel_line_set: gamma must be in F_p*");
  std::vector<ModMat2> out;
  out.reserve(p);
  const Residue g_inv = mod_inv(gamma, p);
  for (Residue u = 0; u < p; ++u) out.push_back(ModMat2{gamma, u, 0, g_inv, p});
  return GroupSet::of(p, std::move(out));
}

inline GroupSet unipotent_set(Residue p) {
  require_modulus(p);
  std::vector<ModMat2> out;
  out.reserve(p);
  for (Residue u = 0; u < p; ++u) out.push_back(ModMat2{1, u, 0, 1, p});
  return GroupSet::of(p, std::move(out));
}

inline GroupSet diagonal_set(Residue p) {
  require_modulus(p);
  std::vector<ModMat2> out;
  out.reserve(p - 1);
  for (Residue l = 1; l < p; ++l) out.push_back(ModMat2{l, 0, 0, mod_inv(l, p), p});
  return GroupSet::of(p, std::move(out));
}

// Conjugating representative sending (1 : 0) to the given point.
inline ModMat2 point_mover(Residue p, ProjPoint pt) {
  if (pt.index == p) return mat_identity(p);
  // (t -1 | 1 0) maps (1:0) to (t:1)
  return ModMat2{pt.index, p - 1, 1, 0, p};
}

// Stabilizer of an arbitrary projective point, as a conjugate of the standard
// Borel subgroup.
inline GroupSet borel_set(const BorelSpec& spec) {
  const Residue p = spec.p;
  if (spec.line == proj_infinity(p)) return standard_borel_set(p);
  const ModMat2 h = point_mover(p, spec.line);
  const ModMat2 h_inv = inverse(h);
  std::vector<ModMat2> out;
  out.reserve(std::size_t{p} * (p - 1));
  for (const ModMat2& m : standard_borel_set(p)) out.push_back(mul(mul(h, m), h_inv));
  return GroupSet::of(p, std::move(out));
}

inline ModMat2 random_element(Residue p, Rng64& rng) {
  require_modulus(p);
  for (;;) {
    const ModMat2 g{static_cast<Residue>(rng.below(p)), static_cast<Residue>(rng.below(p)),
                    static_cast<Residue>(rng.below(p)), static_cast<Residue>(rng.below(p)), p};
    if (det(g) == 1) return g;
  }
}

// size distinct uniform elements of SL_2(F_p). Dense requests shuffle the full
// enumeration; sparse ones use rejection sampling. Both paths are fully
// determined by the seed.
inline GroupSet random_subset(Residue p, std::size_t size, Rng64& rng) {
  const std::uint64_t order = group_order(p);
  if (size > order) throw std::invalid_argument("random_subset: size exceeds the group order");
  if (size * 2 >= order) {
    std::vector<ModMat2> all(full_group(p).elements());
    for (std::size_t i = all.size(); i > 1; --i)
      std::swap(all[i - 1], all[rng.below(i)]);
    all.resize(size);
    return GroupSet::of(p, std::move(all));
  }
  std::unordered_set<std::uint64_t> seen;
  std::vector<ModMat2> out;
  out.reserve(size);
  while (out.size() < size) {
    const ModMat2 g = random_element(p, rng);
    if (seen.insert(pack(g)).second) out.push_back(g);
  }
  return GroupSet::of(p, std::move(out));
}

}  // namespace zlab
