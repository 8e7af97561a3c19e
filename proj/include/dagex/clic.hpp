#ifndef DAGEX_CLIC_HPP
#define DAGEX_CLIC_HPP

#include <algorithm>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "dagex/dag.hpp"
#include "dagex/errors.hpp"

namespace dagex {

// Order-isomorphism between two single-apex closures C_v -> C_w.
struct LocalIso {
  int apex_src = -1;
  int apex_dst = -1;
  VSet src = 0;
  VSet dst = 0;
  std::vector<int> map;  // size n, -1 outside src

  int operator()(int v) const { return map[static_cast<size_t>(v)]; }

  bool is_identity() const { return src == dst && apex_src == apex_dst && identity_on_src(); }
  bool identity_on_src() const {
    for (VSet t = src; t; t &= t - 1) {
      int v = std::countr_zero(t);
      if (map[static_cast<size_t>(v)] != v) return false;
    }
    return true;
  }

  friend bool operator==(const LocalIso& a, const LocalIso& b) {
    return a.src == b.src && a.map == b.map;
  }
  friend bool operator<(const LocalIso& a, const LocalIso& b) {
    if (a.apex_src != b.apex_src) return a.apex_src < b.apex_src;
    if (a.apex_dst != b.apex_dst) return a.apex_dst < b.apex_dst;
    return a.map < b.map;
  }
};

inline LocalIso identity_iso(const Dag& d, int v) {
  LocalIso k;
  k.apex_src = k.apex_dst = v;
  k.src = k.dst = d.closure_mask(v);
  k.map.assign(static_cast<size_t>(d.n()), -1);
  for (VSet t = k.src; t; t &= t - 1) {
    int u = std::countr_zero(t);
    k.map[static_cast<size_t>(u)] = u;
  }
  return k;
}

inline LocalIso inverse_iso(const Dag& d, const LocalIso& k) {
  LocalIso r;
  r.apex_src = k.apex_dst;
  r.apex_dst = k.apex_src;
  r.src = k.dst;
  r.dst = k.src;
  r.map.assign(static_cast<size_t>(d.n()), -1);
  for (VSet t = k.src; t; t &= t - 1) {
    int u = std::countr_zero(t);
    r.map[static_cast<size_t>(k(u))] = u;
  }
  return r;
}

// Restriction of k to C_u for u in Dom(k); lands on C_{k(u)}.
inline LocalIso restrict_iso(const Dag& d, const LocalIso& k, int u) {
  LocalIso r;
  r.apex_src = u;
  r.apex_dst = k(u);
  r.src = d.closure_mask(u);
  r.dst = d.closure_mask(r.apex_dst);
  r.map.assign(static_cast<size_t>(d.n()), -1);
  for (VSet t = r.src; t; t &= t - 1) {
    int x = std::countr_zero(t);
    r.map[static_cast<size_t>(x)] = k(x);
  }
  return r;
}

// outer restricted to the destination closure of inner, then composed.
inline LocalIso compose_iso(const Dag& d, const LocalIso& outer, const LocalIso& inner) {
  LocalIso o = restrict_iso(d, outer, inner.apex_dst);
  LocalIso r;
  r.apex_src = inner.apex_src;
  r.apex_dst = o.apex_dst;
  r.src = inner.src;
  r.dst = o.dst;
  r.map.assign(static_cast<size_t>(d.n()), -1);
  for (VSet t = r.src; t; t &= t - 1) {
    int x = std::countr_zero(t);
    r.map[static_cast<size_t>(x)] = o(inner(x));
  }
  return r;
}

inline bool well_formed_iso(const Dag& d, const LocalIso& k) {
  if (k.apex_src < 0 || k.apex_src >= d.n() || k.apex_dst < 0 || k.apex_dst >= d.n()) return false;
  if (k.src != d.closure_mask(k.apex_src) || k.dst != d.closure_mask(k.apex_dst)) return false;
  if (k.map.size() != static_cast<size_t>(d.n())) return false;
  VSet image = 0;
  for (int v = 0; v < d.n(); ++v) {
    int w = k.map[static_cast<size_t>(v)];
    if (!vhas(k.src, v)) {
      if (w != -1) return false;
      continue;
    }
    if (w < 0 || w >= d.n() || !vhas(k.dst, w) || vhas(image, w)) return false;
    image |= vbit(w);
  }
  if (image != k.dst) return false;
  for (VSet t = k.src; t; t &= t - 1)
    for (VSet s = k.src; s; s &= s - 1) {
      int a = std::countr_zero(t), b = std::countr_zero(s);
      if (d.leq(a, b) != d.leq(k(a), k(b))) return false;
    }
  return k(k.apex_src) == k.apex_dst;
}

// All order-isomorphisms between single-apex closures, identities included.
inline std::vector<LocalIso> enumerate_local_isos(const Dag& d) {
  std::vector<LocalIso> out;
  for (int v = 0; v < d.n(); ++v)
    for (int w = 0; w < d.n(); ++w) {
      VSet cs = d.closure_mask(v), cd = d.closure_mask(w);
      if (vcount(cs) != vcount(cd)) continue;
      std::vector<int> svs, dvs;
      for (VSet t = cs; t; t &= t - 1) svs.push_back(std::countr_zero(t));
      for (VSet t = cd; t; t &= t - 1) dvs.push_back(std::countr_zero(t));
      std::sort(dvs.begin(), dvs.end());
      do {
        LocalIso k;
        k.apex_src = v;
        k.apex_dst = w;
        k.src = cs;
        k.dst = cd;
        k.map.assign(static_cast<size_t>(d.n()), -1);
        for (size_t i = 0; i < svs.size(); ++i) k.map[static_cast<size_t>(svs[i])] = dvs[i];
        bool ok = k(v) == w;
        for (size_t i = 0; i < svs.size() && ok; ++i)
          for (size_t j = 0; j < svs.size() && ok; ++j)
            if (d.leq(svs[i], svs[j]) != d.leq(k(svs[i]), k(svs[j]))) ok = false;
        if (ok) out.push_back(std::move(k));
      } while (std::next_permutation(dvs.begin(), dvs.end()));
    }
  std::sort(out.begin(), out.end());
  return out;
}

// Edge-preserving self-bijections of V.
inline std::vector<std::vector<int>> enumerate_automorphisms(const Dag& d) {
  const int n = d.n();
  std::vector<int> perm(static_cast<size_t>(n), -1);
  std::vector<bool> used(static_cast<size_t>(n), false);
  std::vector<std::vector<int>> out;
  auto rec = [&](auto&& self, int v) -> void {
    if (v == n) {
      out.push_back(perm);
      return;
    }
    for (int w = 0; w < n; ++w) {
      if (used[static_cast<size_t>(w)]) continue;
      bool ok = true;
      for (int u = 0; u < v && ok; ++u)
        if (d.leq(u, v) != d.leq(perm[static_cast<size_t>(u)], w) || d.leq(v, u) != d.leq(w, perm[static_cast<size_t>(u)]))
          ok = false;
      if (!ok) continue;
      perm[static_cast<size_t>(v)] = w;
      used[static_cast<size_t>(w)] = true;
      self(self, v + 1);
      used[static_cast<size_t>(w)] = false;
      perm[static_cast<size_t>(v)] = -1;
    }
  };
  rec(rec, 0);
  return out;
}

// A set of local isomorphisms closed under the CLIC axioms.
struct Clic {
  std::vector<LocalIso> isos;  // sorted, includes identities

  bool contains(const LocalIso& k) const {
    return std::binary_search(isos.begin(), isos.end(), k, [](const LocalIso& a, const LocalIso& b) { return a < b; });
  }
  size_t size() const { return isos.size(); }
  std::vector<LocalIso> nontrivial() const {
    std::vector<LocalIso> out;
    for (const auto& k : isos)
      if (!k.is_identity()) out.push_back(k);
    return out;
  }
  friend bool operator==(const Clic& a, const Clic& b) { return a.isos == b.isos; }
  friend bool operator<(const Clic& a, const Clic& b) {
    auto an = a.nontrivial(), bn = b.nontrivial();
    if (an.size() != bn.size()) return an.size() < bn.size();
    return an < bn;
  }

  // members whose source contains C_v
  std::vector<const LocalIso*> members_over(const Dag& d, int v) const {
    std::vector<const LocalIso*> out;
    VSet cv = d.closure_mask(v);
    for (const auto& k : isos)
      if ((k.src & cv) == cv) out.push_back(&k);
    return out;
  }
};

inline Clic clic_closure(const Dag& d, const std::vector<LocalIso>& generators) {
  for (const auto& g : generators)
    if (!well_formed_iso(d, g)) fail(Errc::MalformedIso, "generator is not a local isomorphism");
  std::set<LocalIso> work;
  for (int v = 0; v < d.n(); ++v) work.insert(identity_iso(d, v));
  for (const auto& g : generators) work.insert(g);
  std::vector<LocalIso> all = enumerate_local_isos(d);
  bool changed = true;
  while (changed) {
    changed = false;
    std::vector<LocalIso> cur(work.begin(), work.end());
    for (const auto& k : cur) changed |= work.insert(inverse_iso(d, k)).second;
    for (const auto& k : cur)
      for (VSet t = k.src; t; t &= t - 1) changed |= work.insert(restrict_iso(d, k, std::countr_zero(t))).second;
    for (const auto& a : cur)
      for (const auto& b : cur)
        if (vhas(b.src, a.apex_dst)) changed |= work.insert(compose_iso(d, b, a)).second;
    // saturation: pointwise-witnessed isos join
    for (const auto& cand : all) {
      if (work.count(cand)) continue;
      bool witnessed = true;
      for (VSet t = cand.src; t && witnessed; t &= t - 1) {
        int v = std::countr_zero(t);
        bool found = false;
        for (const auto& k : work)
          if (vhas(k.src, v) && k(v) == cand(v)) {
            found = true;
            break;
          }
        witnessed = found;
      }
      if (witnessed) {
        work.insert(cand);
        changed = true;
      }
    }
  }
  Clic c;
  c.isos.assign(work.begin(), work.end());
  return c;
}

struct ClicViolation {
  std::string axiom;
  std::string detail;
};

inline std::string iso_str(const Dag& d, const LocalIso& k) {
  std::string s = "{";
  bool first = true;
  for (VSet t = k.src; t; t &= t - 1) {
    int v = std::countr_zero(t);
    if (!first) s += ",";
    first = false;
    s += d.label(v) + "->" + d.label(k(v));
  }
  return s + "}";
}

inline std::vector<ClicViolation> validate_clic(const Dag& d, const std::vector<LocalIso>& isos) {
  for (const auto& k : isos)
    if (!well_formed_iso(d, k)) fail(Errc::MalformedIso, "member is not a local isomorphism: domain must be a single-apex closure and the map order-preserving");
  std::set<LocalIso> s(isos.begin(), isos.end());
  std::vector<ClicViolation> out;
  for (int v = 0; v < d.n(); ++v)
    if (!s.count(identity_iso(d, v))) out.push_back({"identity", "missing id on C_" + d.label(v)});
  for (const auto& k : s)
    if (!s.count(inverse_iso(d, k))) out.push_back({"inverse", "missing inverse of " + iso_str(d, k)});
  for (const auto& k : s)
    for (VSet t = k.src; t; t &= t - 1) {
      int u = std::countr_zero(t);
      if (!s.count(restrict_iso(d, k, u)))
        out.push_back({"restriction", "missing restriction of " + iso_str(d, k) + " to C_" + d.label(u)});
    }
  for (const auto& a : s)
    for (const auto& b : s)
      if (vhas(b.src, a.apex_dst) && !s.count(compose_iso(d, b, a)))
        out.push_back({"composition", "missing " + iso_str(d, b) + " after " + iso_str(d, a)});
  for (const auto& cand : enumerate_local_isos(d)) {
    if (s.count(cand)) continue;
    bool witnessed = true;
    for (VSet t = cand.src; t && witnessed; t &= t - 1) {
      int v = std::countr_zero(t);
      bool found = false;
      for (const auto& k : s)
        if (vhas(k.src, v) && k(v) == cand(v)) {
          found = true;
          break;
        }
      witnessed = found;
    }
    if (witnessed) out.push_back({"saturation", "pointwise-witnessed iso missing: " + iso_str(d, cand)});
  }
  return out;
}

// All distinct CLICs, trivial first, by closure search over the iso lattice.
inline std::vector<Clic> enumerate_clics(const Dag& d, size_t max_nontrivial_isos = 20) {
  std::vector<LocalIso> all = enumerate_local_isos(d);
  std::vector<LocalIso> nontriv;
  for (const auto& k : all)
    if (!k.is_identity()) nontriv.push_back(k);
  if (nontriv.size() > max_nontrivial_isos)
    fail(Errc::TooManyIsos, "too many non-identity local isomorphisms for CLIC enumeration");
  std::set<Clic> seen;
  std::vector<Clic> queue{clic_closure(d, {})};
  seen.insert(queue[0]);
  for (size_t qi = 0; qi < queue.size(); ++qi) {
    Clic cur = queue[qi];  // copy: queue may reallocate
    for (const auto& k : nontriv) {
      if (cur.contains(k)) continue;
      auto gens = cur.isos;
      gens.push_back(k);
      Clic next = clic_closure(d, gens);
      if (seen.insert(next).second) queue.push_back(next);
    }
  }
  std::vector<Clic> out(seen.begin(), seen.end());
  std::sort(out.begin(), out.end());
  return out;
}

inline bool vertex_equiv(const Dag& d, const Clic& k, int v, int w) {
  if (v < 0 || v >= d.n() || w < 0 || w >= d.n()) fail(Errc::UnknownVertex, "vertex id out of range");
  for (const auto* ki : k.members_over(d, v))
    if ((*ki)(v) == w) return true;
  return false;
}

}  // namespace dagex

#endif
