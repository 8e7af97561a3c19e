#ifndef DAGEX_TEST_ORACLES_HPP
#define DAGEX_TEST_ORACLES_HPP

// Brute-force oracles, independent of the library's implementation paths.

#include <algorithm>
#include <map>
#include <set>
#include <vector>

#include "dagex/dagex.hpp"

namespace oracle {

using namespace dagex;

// downsets by direct subset scan against raw reachability from edge pairs
inline std::set<std::set<std::string>> closed_sets_bruteforce(
    const std::vector<std::string>& verts, const std::vector<std::pair<std::string, std::string>>& edges) {
  int n = static_cast<int>(verts.size());
  std::map<std::string, int> id;
  for (int i = 0; i < n; ++i) id[verts[static_cast<size_t>(i)]] = i;
  std::vector<std::vector<bool>> reach(static_cast<size_t>(n), std::vector<bool>(static_cast<size_t>(n), false));
  for (const auto& [a, b] : edges) reach[static_cast<size_t>(id[a])][static_cast<size_t>(id[b])] = true;
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (reach[static_cast<size_t>(i)][static_cast<size_t>(k)] && reach[static_cast<size_t>(k)][static_cast<size_t>(j)])
          reach[static_cast<size_t>(i)][static_cast<size_t>(j)] = true;
  std::set<std::set<std::string>> out;
  for (unsigned s = 0; s < (1u << n); ++s) {
    bool closed = true;
    for (int v = 0; v < n && closed; ++v)
      for (int u = 0; u < n && closed; ++u)
        if (((s >> v) & 1) && reach[static_cast<size_t>(u)][static_cast<size_t>(v)] && !((s >> u) & 1)) closed = false;
    if (!closed) continue;
    std::set<std::string> set;
    for (int v = 0; v < n; ++v)
      if ((s >> v) & 1) set.insert(verts[static_cast<size_t>(v)]);
    out.insert(set);
  }
  return out;
}

// local isomorphisms by scanning every subset pair and every bijection
inline size_t count_local_isos_bruteforce(const Dag& d) {
  size_t count = 0;
  auto single_apex_closure = [&](VSet s) -> int {
    for (VSet t = s; t; t &= t - 1) {
      int v = std::countr_zero(t);
      if (d.closure_mask(v) == s) return v;
    }
    return -1;
  };
  VSet full = d.full_mask();
  for (VSet a = 1; a <= full; ++a) {
    if (single_apex_closure(a) < 0) continue;
    for (VSet b = 1; b <= full; ++b) {
      if (single_apex_closure(b) < 0 || vcount(a) != vcount(b)) continue;
      std::vector<int> av, bv;
      for (VSet t = a; t; t &= t - 1) av.push_back(std::countr_zero(t));
      for (VSet t = b; t; t &= t - 1) bv.push_back(std::countr_zero(t));
      std::sort(bv.begin(), bv.end());
      do {
        bool ok = true;
        for (size_t i = 0; i < av.size() && ok; ++i)
          for (size_t j = 0; j < av.size() && ok; ++j)
            if (d.leq(av[i], av[j]) != d.leq(bv[i], bv[j])) ok = false;
        if (ok) ++count;
      } while (std::next_permutation(bv.begin(), bv.end()));
    }
  }
  return count;
}

// index equivalence by exhausting every bijection between the domains
inline bool index_equiv_bruteforce(const Dag& d, const Clic& k, const Index& a, const Index& b) {
  if (vcount(a.dom) != vcount(b.dom)) return false;
  std::vector<int> left, right;
  for (VSet t = a.dom; t; t &= t - 1) left.push_back(std::countr_zero(t));
  for (VSet t = b.dom; t; t &= t - 1) right.push_back(std::countr_zero(t));
  std::sort(right.begin(), right.end());
  do {
    bool ok = true;
    for (size_t i = 0; i < left.size() && ok; ++i) {
      int v = left[i], w = right[i];
      Index av = restrict(d, a, d.closure_mask(v));
      bool found = false;
      for (const auto* ki : k.members_over(d, v)) {
        LocalIso kr = restrict_iso(d, *ki, v);
        if (kr.apex_dst != w || !vhas(b.dom, w)) continue;
        if (transport(d, kr, av) == restrict(d, b, d.closure_mask(w))) {
          found = true;
          break;
        }
      }
      ok = found;
    }
    if (ok) return true;
  } while (std::next_permutation(right.begin(), right.end()));
  return false;
}

// orbit representative by grouping a whole index universe with the
// brute-force equivalence
inline Index class_key_bruteforce(const Dag& d, const Clic& k, const Index& a,
                                  const std::vector<Index>& universe) {
  Index best = a;
  for (const auto& b : universe)
    if (index_equiv_bruteforce(d, k, a, b) && b < best) best = b;
  return best;
}

// all indices (every closed domain) with values < box
inline std::vector<Index> index_universe(const Dag& d, int box) {
  std::vector<Index> out;
  for (VSet c : d.closed_sets()) dagex::detail::enum_assignments(d, c, box, out);
  return out;
}

inline std::vector<Index> generic_universe(const Dag& d, const Clic& k, int box) {
  std::vector<Index> out;
  for (const auto& a : index_universe(d, box))
    if (is_generic(d, k, a)) out.push_back(a);
  return out;
}

// three-case evaluation of rho, following the case split rather than tau_B
inline Index rho_threecase(const Dag& d, const Clic& k, const Index& anchor, const Index& b) {
  auto in_restr = [&](const Index& x) {
    for (const auto& r : restr_set(d, anchor))
      if (vcount(r.dom) == vcount(x.dom) && index_equiv_bruteforce(d, k, x, r)) return true;
    return false;
  };
  Index out = b;
  for (VSet m = b.dom; m; m &= m - 1) {
    int v = std::countr_zero(m);
    Index bv = restrict(d, b, d.closure_mask(v));
    if (in_restr(bv)) {
      continue;  // case 1: value fixed
    }
    // case 2: stripped restriction matches some anchor closure minus apex
    bool stripped_match = false;
    for (VSet t = anchor.dom; t && !stripped_match; t &= t - 1) {
      int w = std::countr_zero(t);
      Index strip_a = restrict(d, anchor, d.closure_mask(w) & ~vbit(w));
      Index strip_b = restrict(d, b, d.closure_mask(v) & ~vbit(v));
      if (vcount(strip_a.dom) == vcount(strip_b.dom) && index_equiv_bruteforce(d, k, strip_b, strip_a))
        stripped_match = true;
    }
    if (stripped_match) {
      std::uint64_t ell = 1;
      while (true) {
        Index bumped = bv;
        bumped.vals[static_cast<size_t>(v)] = b.at(v) + ell;
        if (!in_restr(bumped)) break;
        ++ell;
      }
      out.vals[static_cast<size_t>(v)] = b.at(v) + ell;
    } else {
      out.vals[static_cast<size_t>(v)] = b.at(v) + 1;  // case 3
    }
  }
  return out;
}

}  // namespace oracle

#endif
