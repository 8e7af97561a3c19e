#ifndef DAGEX_INDEX_HPP
#define DAGEX_INDEX_HPP

#include <algorithm>
#include <cstdint>
#include <map>
#include <mutex>
#include <set>
#include <vector>

#include "dagex/clic.hpp"
#include "dagex/dag.hpp"
#include "dagex/errors.hpp"

namespace dagex {

// alpha: a function from a closed domain to naturals. vals is sized to |V|
// and kept zero outside dom so equality is structural.
struct Index {
  VSet dom = 0;
  std::vector<std::uint64_t> vals;

  std::uint64_t at(int v) const { return vals[static_cast<size_t>(v)]; }

  friend bool operator==(const Index& a, const Index& b) { return a.dom == b.dom && a.vals == b.vals; }
  friend bool operator!=(const Index& a, const Index& b) { return !(a == b); }
  // domain by the A_G well-order, then value vector in vertex-label order
  friend bool operator<(const Index& a, const Index& b) {
    if (a.dom != b.dom) return vset_wellorder_less(a.dom, b.dom);
    return a.vals < b.vals;
  }
};

inline Index make_index(const Dag& d, const std::vector<std::pair<std::string, std::uint64_t>>& entries) {
  Index a;
  a.vals.assign(static_cast<size_t>(d.n()), 0);
  for (const auto& [lbl, val] : entries) {
    int v = d.id_of(lbl);
    a.dom |= vbit(v);
    a.vals[static_cast<size_t>(v)] = val;
  }
  if (!d.is_closed(a.dom)) fail(Errc::NotClosed, "index domain is not downward closed");
  return a;
}

inline Index empty_index(const Dag& d) {
  Index a;
  a.vals.assign(static_cast<size_t>(d.n()), 0);
  return a;
}

inline Index restrict(const Dag& d, const Index& a, VSet c) {
  if (!d.is_closed(c)) fail(Errc::NotClosed, "restriction target is not closed");
  if ((c & a.dom) != c) fail(Errc::NotSubset, "restriction target not contained in the domain");
  Index r;
  r.dom = c;
  r.vals.assign(static_cast<size_t>(d.n()), 0);
  for (VSet t = c; t; t &= t - 1) {
    int v = std::countr_zero(t);
    r.vals[static_cast<size_t>(v)] = a.at(v);
  }
  return r;
}

// One restriction per closed subset of Dom(alpha), in the A_G well-order.
inline std::vector<Index> restr_set(const Dag& d, const Index& a) {
  std::vector<Index> out;
  for (VSet c : d.closed_sets())
    if ((c & a.dom) == c) out.push_back(restrict(d, a, c));
  return out;
}

// kappa acting on an index with domain inside Dom(kappa).
inline Index transport(const Dag& d, const LocalIso& k, const Index& a) {
  Index r;
  r.vals.assign(static_cast<size_t>(d.n()), 0);
  for (VSet t = a.dom; t; t &= t - 1) {
    int v = std::countr_zero(t);
    int w = k(v);
    r.dom |= vbit(w);
    r.vals[static_cast<size_t>(w)] = a.at(v);
  }
  return r;
}

// Membership in N_K^G (full domain) / I_K^G: no nontrivial CLIC transport
// fixes any closure-restriction of alpha.
inline bool is_generic(const Dag& d, const Clic& k, const Index& a) {
  for (VSet t = a.dom; t; t &= t - 1) {
    int v = std::countr_zero(t);
    Index av = restrict(d, a, d.closure_mask(v));
    for (const auto* ki : k.members_over(d, v)) {
      LocalIso kr = restrict_iso(d, *ki, v);
      if (kr.is_identity()) continue;
      // only moves defined inside Dom(alpha) count for I_K^G membership
      if ((d.closure_mask(kr.apex_dst) & a.dom) != d.closure_mask(kr.apex_dst)) continue;
      Index moved = transport(d, kr, av);
      Index target = restrict(d, a, d.closure_mask(kr.apex_dst));
      if (moved == target) return false;
    }
  }
  return true;
}

namespace detail {

// admissible(v,w): some kappa in K_v carries alpha|_{C_v} exactly onto beta|_{C_w}
inline bool admissible_pair(const Dag& d, const Clic& k, const Index& a, const Index& b, int v, int w) {
  if (!vhas(b.dom, w)) return false;
  Index av = restrict(d, a, d.closure_mask(v));
  Index bw = restrict(d, b, d.closure_mask(w));
  for (const auto* ki : k.members_over(d, v)) {
    LocalIso kr = restrict_iso(d, *ki, v);
    if (kr.apex_dst != w) continue;
    if (transport(d, kr, av) == bw) return true;
  }
  return false;
}

// Kuhn's bipartite matching over small vertex lists.
inline bool perfect_matching(const std::vector<std::vector<int>>& adj, int nright) {
  int nleft = static_cast<int>(adj.size());
  std::vector<int> match_r(static_cast<size_t>(nright), -1);
  std::vector<char> vis;
  auto aug = [&](auto&& self, int u) -> bool {
    for (int w : adj[static_cast<size_t>(u)]) {
      if (vis[static_cast<size_t>(w)]) continue;
      vis[static_cast<size_t>(w)] = 1;
      if (match_r[static_cast<size_t>(w)] < 0 || self(self, match_r[static_cast<size_t>(w)])) {
        match_r[static_cast<size_t>(w)] = u;
        return true;
      }
    }
    return false;
  };
  for (int u = 0; u < nleft; ++u) {
    vis.assign(static_cast<size_t>(nright), 0);
    if (!aug(aug, u)) return false;
  }
  return true;
}

}  // namespace detail

// alpha ~K beta: a bijection between the domains with per-vertex CLIC transport.
inline bool index_equiv(const Dag& d, const Clic& k, const Index& a, const Index& b) {
  if (!is_generic(d, k, a) || !is_generic(d, k, b)) fail(Errc::NotGeneric, "index_equiv requires generic indices");
  if (vcount(a.dom) != vcount(b.dom)) return false;
  std::vector<int> left, right;
  for (VSet t = a.dom; t; t &= t - 1) left.push_back(std::countr_zero(t));
  for (VSet t = b.dom; t; t &= t - 1) right.push_back(std::countr_zero(t));
  std::vector<std::vector<int>> adj(left.size());
  for (size_t i = 0; i < left.size(); ++i) {
    for (size_t j = 0; j < right.size(); ++j)
      if (detail::admissible_pair(d, k, a, b, left[i], right[j])) adj[i].push_back(static_cast<int>(j));
    if (adj[i].empty()) return false;
  }
  return detail::perfect_matching(adj, static_cast<int>(right.size()));
}

// Canonical representative of [alpha]_K.
struct ClassKey {
  Index rep;
  friend bool operator==(const ClassKey& a, const ClassKey& b) { return a.rep == b.rep; }
  friend bool operator!=(const ClassKey& a, const ClassKey& b) { return !(a == b); }
  friend bool operator<(const ClassKey& a, const ClassKey& b) { return a.rep < b.rep; }
};

// Cache of class_key results for one (Dag, Clic) pair. Behaves as a pure
// cache; concurrent readers allowed.
class KeyCache {
 public:
  const Index* find(const Index& a) const {
    std::lock_guard<std::mutex> g(mu_);
    auto it = m_.find(a);
    return it == m_.end() ? nullptr : &it->second;
  }
  void put(const Index& a, const Index& rep) {
    std::lock_guard<std::mutex> g(mu_);
    m_.emplace(a, rep);
  }

 private:
  mutable std::mutex mu_;
  std::map<Index, Index> m_;
};

namespace detail {

// Enumerate orbit candidates beta = alpha . phi^{-1} over injective vertex
// assignments assembled from CLIC apex moves, then verify with index_equiv.
inline void orbit_rec(const Dag& d, const Clic& k, const Index& a, const std::vector<int>& verts,
                      size_t i, std::vector<int>& phi, VSet used, std::set<Index>& out) {
  if (i == verts.size()) {
    Index b;
    b.dom = used;
    b.vals.assign(static_cast<size_t>(d.n()), 0);
    for (size_t j = 0; j < verts.size(); ++j) b.vals[static_cast<size_t>(phi[j])] = a.at(verts[j]);
    if (!d.is_closed(b.dom)) return;
    if (out.count(b)) return;
    if (is_generic(d, k, b) && index_equiv(d, k, a, b)) out.insert(b);
    return;
  }
  int v = verts[i];
  for (int w = 0; w < d.n(); ++w) {
    if (vhas(used, w) || !vertex_equiv(d, k, v, w)) continue;
    phi[i] = w;
    orbit_rec(d, k, a, verts, i + 1, phi, used | vbit(w), out);
  }
}

}  // namespace detail

inline std::set<Index> orbit_of(const Dag& d, const Clic& k, const Index& a) {
  if (!is_generic(d, k, a)) fail(Errc::NotGeneric, "orbit requires a generic index");
  std::vector<int> verts;
  for (VSet t = a.dom; t; t &= t - 1) verts.push_back(std::countr_zero(t));
  std::vector<int> phi(verts.size(), -1);
  std::set<Index> out;
  detail::orbit_rec(d, k, a, verts, 0, phi, 0, out);
  return out;
}

inline ClassKey class_key(const Dag& d, const Clic& k, const Index& a, KeyCache* cache = nullptr) {
  if (cache)
    if (const Index* hit = cache->find(a)) return ClassKey{*hit};
  std::set<Index> orb = orbit_of(d, k, a);
  Index rep = *orb.begin();
  if (cache)
    for (const auto& b : orb) cache->put(b, rep);
  return ClassKey{rep};
}

// {class_key(alpha|_C) : C closed in Dom(alpha)}, deduplicated, ordered.
inline std::vector<ClassKey> restr_class_keys(const Dag& d, const Clic& k, const Index& a,
                                              KeyCache* cache = nullptr) {
  if (!is_generic(d, k, a)) fail(Errc::NotGeneric, "restr_class_keys requires a generic index");
  std::set<ClassKey> s;
  for (const auto& r : restr_set(d, a)) s.insert(class_key(d, k, r, cache));
  return {s.begin(), s.end()};
}

// Restr'(alpha,K): restr_class_keys minus [alpha]_K itself.
inline std::vector<ClassKey> restr_prime_class_keys(const Dag& d, const Clic& k, const Index& a,
                                                    KeyCache* cache = nullptr) {
  ClassKey own = class_key(d, k, a, cache);
  std::vector<ClassKey> out;
  for (const auto& key : restr_class_keys(d, k, a, cache))
    if (!(key == own)) out.push_back(key);
  return out;
}

// D_{alpha,beta}: vertices of Dom(alpha) whose closure-restriction class
// appears among beta's restriction classes.
inline VSet wedge_domain(const Dag& d, const Clic& k, const Index& a, const Index& b,
                         KeyCache* cache = nullptr) {
  auto bkeys = restr_class_keys(d, k, b, cache);
  std::set<ClassKey> bs(bkeys.begin(), bkeys.end());
  VSet dom = 0;
  for (VSet t = a.dom; t; t &= t - 1) {
    int v = std::countr_zero(t);
    Index av = restrict(d, a, d.closure_mask(v));
    if (bs.count(class_key(d, k, av, cache))) dom |= vbit(v);
  }
  return dom;
}

inline Index wedge(const Dag& d, const Clic& k, const Index& a, const Index& b,
                   KeyCache* cache = nullptr) {
  VSet dom = wedge_domain(d, k, a, b, cache);
  if (!d.is_closed(dom))
    fail(Errc::WedgeDomainNotClosed, "D_{alpha,beta} is not downward closed");
  return restrict(d, a, dom);
}

}  // namespace dagex

#endif
