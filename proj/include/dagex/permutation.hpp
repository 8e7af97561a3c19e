#ifndef DAGEX_PERMUTATION_HPP
#define DAGEX_PERMUTATION_HPP

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <vector>

#include "dagex/clic.hpp"
#include "dagex/dag.hpp"
#include "dagex/errors.hpp"
#include "dagex/index.hpp"

namespace dagex {

// Finitary hierarchical permutation: per-vertex, per-context permutation
// tables over the value box {0..box-1}; identity outside stored contexts.
// Hierarchical consistency holds by construction because the value at v
// depends only on the restriction to C_v.
struct GPermutation {
  int box = 0;
  // tables[v]: context (index on C_v minus v) -> permutation of {0..box-1}
  std::vector<std::map<Index, std::vector<std::uint32_t>>> tables;

  static GPermutation identity(const Dag& d, int box) {
    GPermutation t;
    t.box = box;
    t.tables.resize(static_cast<size_t>(d.n()));
    return t;
  }
};

inline bool perm_is_identity(const std::vector<std::uint32_t>& p) {
  for (std::uint32_t i = 0; i < p.size(); ++i)
    if (p[i] != i) return false;
  return true;
}

inline Index strip_context(const Dag& d, const Index& a, int v) {
  return restrict(d, a, d.closure_mask(v) & ~vbit(v));
}

inline Index apply(const Dag& d, const GPermutation& t, const Index& a) {
  Index r = a;
  for (VSet m = a.dom; m; m &= m - 1) {
    int v = std::countr_zero(m);
    auto it = t.tables[static_cast<size_t>(v)].find(strip_context(d, a, v));
    if (it == t.tables[static_cast<size_t>(v)].end()) continue;
    std::uint64_t val = a.at(v);
    if (val < it->second.size()) {
      r.vals[static_cast<size_t>(v)] = it->second[val];
    } else if (!perm_is_identity(it->second)) {
      fail(Errc::ValueOutOfBox, "value outside the box meets a non-identity table");
    }
  }
  return r;
}

inline bool fixes(const Dag& d, const GPermutation& t, const Index& a) { return apply(d, t, a) == a; }

// Exhaustive consistency check over all full index pairs in the box:
// equal closure restrictions before the map iff equal after. Holds by
// construction for table-built permutations; kept as a test guard.
inline bool verify_local_consistency(const Dag& d, const GPermutation& t, int box) {
  const int n = d.n();
  std::vector<Index> all;
  Index a = empty_index(d);
  a.dom = d.full_mask();
  auto rec = [&](auto&& self, int v) -> void {
    if (v == n) {
      all.push_back(a);
      return;
    }
    for (int x = 0; x < box; ++x) {
      a.vals[static_cast<size_t>(v)] = static_cast<std::uint64_t>(x);
      self(self, v + 1);
    }
  };
  rec(rec, 0);
  std::vector<Index> imgs;
  imgs.reserve(all.size());
  for (const auto& b : all) imgs.push_back(apply(d, t, b));
  for (size_t i = 0; i < all.size(); ++i)
    for (size_t j = i + 1; j < all.size(); ++j)
      for (VSet c : d.closed_sets())
        if ((restrict(d, all[i], c) == restrict(d, all[j], c)) !=
            (restrict(d, imgs[i], c) == restrict(d, imgs[j], c)))
          return false;
  return true;
}

namespace detail {

inline void enum_assignments(const Dag& d, VSet dom, int box, std::vector<Index>& out) {
  std::vector<int> verts;
  for (VSet t = dom; t; t &= t - 1) verts.push_back(std::countr_zero(t));
  Index a = empty_index(d);
  a.dom = dom;
  auto rec = [&](auto&& self, size_t i) -> void {
    if (i == verts.size()) {
      out.push_back(a);
      return;
    }
    for (int x = 0; x < box; ++x) {
      a.vals[static_cast<size_t>(verts[i])] = static_cast<std::uint64_t>(x);
      self(self, i + 1);
    }
  };
  rec(rec, 0);
}

}  // namespace detail

// tau commutes with every symmetry member on generic local indices.
inline bool is_k_commuting(const Dag& d, const Clic& k, const GPermutation& t, int box) {
  for (int v = 0; v < d.n(); ++v) {
    std::vector<Index> locals;
    detail::enum_assignments(d, d.closure_mask(v), box, locals);
    for (const auto& b : locals) {
      if (!is_generic(d, k, b)) continue;
      for (const auto* ki : k.members_over(d, v)) {
        LocalIso kr = restrict_iso(d, *ki, v);
        if (apply(d, t, transport(d, kr, b)) != transport(d, kr, apply(d, t, b))) return false;
      }
    }
  }
  return true;
}

// Draws one uniform permutation per equivalence class of pointed contexts
// (v, ctx) and propagates by equivariance; deterministic in the seed.
inline GPermutation random_k_commuting(const Dag& d, const Clic& k, int box, std::uint64_t seed) {
  GPermutation t = GPermutation::identity(d, box);
  std::vector<std::pair<int, Index>> items;
  for (int v = 0; v < d.n(); ++v) {
    std::vector<Index> ctxs;
    detail::enum_assignments(d, d.closure_mask(v) & ~vbit(v), box, ctxs);
    for (auto& c : ctxs) items.emplace_back(v, std::move(c));
  }
  std::sort(items.begin(), items.end());
  std::map<std::pair<int, Index>, size_t> pos;
  for (size_t i = 0; i < items.size(); ++i) pos.emplace(items[i], i);

  std::vector<size_t> parent(items.size());
  std::iota(parent.begin(), parent.end(), size_t{0});
  auto find = [&](size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (size_t i = 0; i < items.size(); ++i) {
    const auto& [v, ctx] = items[i];
    for (const auto* ki : k.members_over(d, v)) {
      LocalIso kr = restrict_iso(d, *ki, v);
      auto it = pos.find({kr.apex_dst, transport(d, kr, ctx)});
      if (it == pos.end()) continue;
      size_t a = find(i), b = find(it->second);
      if (a != b) parent[std::max(a, b)] = std::min(a, b);
    }
  }

  std::mt19937_64 rng(seed);
  std::map<size_t, std::vector<std::uint32_t>> perms;
  for (size_t i = 0; i < items.size(); ++i) {
    size_t root = find(i);
    auto it = perms.find(root);
    if (it == perms.end()) {
      std::vector<std::uint32_t> p(static_cast<size_t>(box));
      std::iota(p.begin(), p.end(), 0u);
      for (size_t j = p.size(); j > 1; --j) std::swap(p[j - 1], p[rng() % j]);
      it = perms.emplace(root, std::move(p)).first;
    }
    t.tables[static_cast<size_t>(items[i].first)].emplace(items[i].second, it->second);
  }
  return t;
}

// min{k > m : k not in B} for m outside B, m itself otherwise.
inline std::uint64_t tau_shift(const std::set<std::uint64_t>& b, std::uint64_t m) {
  if (b.count(m)) return m;
  std::uint64_t x = m + 1;
  while (b.count(x)) ++x;
  return x;
}

// The anchor-fixing shift injection rho_alpha, precomputed per anchor.
struct ShiftInjection {
  Index anchor;
  // per anchor vertex w: the value bucket A_alpha(w) = {alpha(w') : same
  // stripped closure set, w' equivalent to w}
  std::vector<std::set<std::uint64_t>> bucket;
};

inline ShiftInjection make_shift_injection(const Dag& d, const Clic& k, const Index& anchor,
                                           KeyCache* cache = nullptr) {
  (void)cache;
  if (anchor.dom != d.full_mask() || !is_generic(d, k, anchor))
    fail(Errc::NotGeneric, "rho anchor must be a full generic index");
  ShiftInjection s;
  s.anchor = anchor;
  s.bucket.resize(static_cast<size_t>(d.n()));
  for (int w = 0; w < d.n(); ++w) {
    VSet strip = d.closure_mask(w) & ~vbit(w);
    for (int w2 = 0; w2 < d.n(); ++w2)
      if ((d.closure_mask(w2) & ~vbit(w2)) == strip && vertex_equiv(d, k, w2, w))
        s.bucket[static_cast<size_t>(w)].insert(anchor.at(w2));
  }
  return s;
}

inline Index rho_apply(const Dag& d, const Clic& k, const ShiftInjection& s, const Index& b,
                       KeyCache* cache = nullptr) {
  (void)cache;
  if (!is_generic(d, k, b)) fail(Errc::NotGeneric, "rho acts on generic indices");
  Index r = b;
  for (VSet m = b.dom; m; m &= m - 1) {
    int v = std::countr_zero(m);
    Index strip = strip_context(d, b, v);
    // a stripped-context match must be pointed: some kappa over C_v with
    // kappa(v) = w carries the context onto the anchor's context at w
    std::uint64_t shifted = 0;
    bool matched = false;
    for (const auto* ki : k.members_over(d, v)) {
      LocalIso kr = restrict_iso(d, *ki, v);
      int w = kr.apex_dst;
      if (transport(d, kr, strip) != strip_context(d, s.anchor, w)) continue;
      std::uint64_t val = tau_shift(s.bucket[static_cast<size_t>(w)], b.at(v));
      if (matched && val != shifted)
        fail(Errc::NotGeneric, "inconsistent shift targets; anchor not generic");
      shifted = val;
      matched = true;
    }
    r.vals[static_cast<size_t>(v)] = matched ? shifted : b.at(v) + 1;
  }
  return r;
}

inline Index rho_power(const Dag& d, const Clic& k, const ShiftInjection& s, Index b, int j,
                       KeyCache* cache = nullptr) {
  for (int i = 0; i < j; ++i) b = rho_apply(d, k, s, b, cache);
  return b;
}

}  // namespace dagex

#endif
