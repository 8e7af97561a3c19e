#ifndef DAGEX_RENDER_HPP
#define DAGEX_RENDER_HPP

#include <algorithm>
#include <set>
#include <string>
#include <vector>

#include "dagex/clic.hpp"
#include "dagex/dag.hpp"
#include "dagex/index.hpp"

namespace dagex {

// Symbolic rendering of the array representation, convention:
//   - vertices grouped by depth (longest chain below), groups joined by ","
//   - inside a group, one slot per K-vertex-equivalence class; a merged
//     class renders its present symbols as an unordered brace set, an
//     unmerged vertex renders positionally with 0 for absent
//   - symbols i,j,k,l,m,... assigned in (depth, declaration-order) order;
//     a single-vertex graph uses the traditional n
//   - arguments ordered by (cardinality, declaration-order vertex sequence)
//   - genericity constraints reduced to their minimal tuple forms

namespace render_detail {

inline std::vector<std::string> symbol_pool() {
  return {"i", "j", "k", "ℓ", "m", "p", "q", "s", "t", "w"};
}

struct Layout {
  std::vector<int> depth;               // per vertex
  std::vector<std::string> sym;         // per vertex
  std::vector<std::vector<VSet>> slots; // per depth group: equivalence classes, ordered
  std::vector<int> order;               // vertices in (depth, decl) order
};

inline Layout make_layout(const Dag& d, const Clic& k) {
  Layout L;
  const int n = d.n();
  L.depth.assign(static_cast<size_t>(n), 0);
  for (int pass = 0; pass < n; ++pass)
    for (auto [u, v] : d.edges())
      L.depth[static_cast<size_t>(v)] = std::max(L.depth[static_cast<size_t>(v)], L.depth[static_cast<size_t>(u)] + 1);
  L.order.resize(static_cast<size_t>(n));
  for (int v = 0; v < n; ++v) L.order[static_cast<size_t>(v)] = v;
  std::sort(L.order.begin(), L.order.end(), [&](int a, int b) {
    if (L.depth[static_cast<size_t>(a)] != L.depth[static_cast<size_t>(b)]) return L.depth[static_cast<size_t>(a)] < L.depth[static_cast<size_t>(b)];
    return d.decl_pos(a) < d.decl_pos(b);
  });
  auto pool = symbol_pool();
  L.sym.assign(static_cast<size_t>(n), "");
  for (size_t i = 0; i < L.order.size(); ++i)
    L.sym[static_cast<size_t>(L.order[i])] = n == 1 ? "n" : pool[i % pool.size()];

  int maxd = 0;
  for (int v = 0; v < n; ++v) maxd = std::max(maxd, L.depth[static_cast<size_t>(v)]);
  L.slots.resize(static_cast<size_t>(maxd) + 1);
  VSet assigned = 0;
  for (int v : L.order) {
    if (vhas(assigned, v)) continue;
    VSet cls = 0;
    for (int w = 0; w < n; ++w)
      if (vertex_equiv(d, k, v, w)) cls |= vbit(w);
    assigned |= cls;
    L.slots[static_cast<size_t>(L.depth[static_cast<size_t>(v)])].push_back(cls);
  }
  return L;
}

// slot content for subgraph C: 0 / sym / {sym,sym}
inline std::string slot_str(const Dag& d, const Layout& L, VSet cls, VSet c) {
  std::vector<std::string> present;
  for (int v : L.order)
    if (vhas(cls & c, v)) present.push_back(L.sym[static_cast<size_t>(v)]);
  if (present.empty()) return vcount(cls) > 1 ? "0" : "0";
  if (present.size() == 1) return present[0];
  std::string s = "{";
  for (size_t i = 0; i < present.size(); ++i) s += (i ? "," : "") + present[i];
  return s + "}";
}

inline std::string subscript(const std::string& body) {
  if (body.size() == 1) return "_" + body;
  return "_{" + body + "}";
}

inline std::string arg_str(const Dag& d, const Layout& L, VSet c) {
  std::string body;
  for (size_t g = 0; g < L.slots.size(); ++g) {
    if (g) body += ",";
    for (VSet cls : L.slots[g]) body += slot_str(d, L, cls, c);
  }
  return "U" + subscript(body);
}

struct Constraint {
  std::vector<std::string> lhs, rhs;
  friend bool operator==(const Constraint& a, const Constraint& b) { return a.lhs == b.lhs && a.rhs == b.rhs; }
  friend bool operator<(const Constraint& a, const Constraint& b) {
    if (a.lhs.size() != b.lhs.size()) return a.lhs.size() < b.lhs.size();
    if (a.lhs != b.lhs) return a.lhs < b.lhs;
    return a.rhs < b.rhs;
  }
};

inline std::string tuple_str(const std::vector<std::string>& t) {
  if (t.size() == 1) return t[0];
  std::string s = "(";
  for (size_t i = 0; i < t.size(); ++i) s += (i ? "," : "") + t[i];
  return s + ")";
}

inline std::vector<Constraint> genericity_constraints(const Dag& d, const Clic& k, const Layout& L) {
  std::set<Constraint> out;
  for (int v = 0; v < d.n(); ++v) {
    for (const auto* ki : k.members_over(d, v)) {
      LocalIso kr = restrict_iso(d, *ki, v);
      if (kr.identity_on_src()) continue;
      // kappa(alpha|_{C_v}) != alpha|_{C_{kappa(v)}}, position order = C_{kappa(v)}
      Constraint c;
      for (int u : L.order) {
        if (!vhas(kr.dst, u)) continue;
        int pre = -1;
        for (VSet t = kr.src; t; t &= t - 1)
          if (kr(std::countr_zero(t)) == u) pre = std::countr_zero(t);
        std::string lhs = L.sym[static_cast<size_t>(u)];
        std::string rhs = L.sym[static_cast<size_t>(pre)];
        if (lhs == rhs) continue;  // equal positions never separate the tuples
        c.lhs.push_back(lhs);
        c.rhs.push_back(rhs);
      }
      if (c.lhs.empty()) continue;
      // canonical orientation
      Constraint flipped{c.rhs, c.lhs};
      out.insert(std::min(c, flipped));
    }
  }
  // (i,j) != (j,i) and friends collapse to a single inequality when every
  // position is the same unordered pair
  std::set<Constraint> reduced;
  for (auto c : out) {
    std::set<std::pair<std::string, std::string>> pairs;
    for (size_t i = 0; i < c.lhs.size(); ++i) {
      auto p = std::minmax(c.lhs[i], c.rhs[i]);
      pairs.insert({p.first, p.second});
    }
    if (pairs.size() == 1) {
      auto [x, y] = *pairs.begin();
      reduced.insert(Constraint{{x}, {y}});
    } else {
      reduced.insert(c);
    }
  }
  // drop tuple constraints already implied by a retained simple one
  std::set<std::pair<std::string, std::string>> simple;
  for (const auto& c : reduced)
    if (c.lhs.size() == 1) simple.insert(std::minmax(c.lhs[0], c.rhs[0]));
  std::vector<Constraint> final_list;
  for (const auto& c : reduced) {
    if (c.lhs.size() > 1) {
      bool implied = false;
      for (size_t i = 0; i < c.lhs.size() && !implied; ++i)
        if (simple.count(std::minmax(c.lhs[i], c.rhs[i]))) implied = true;
      if (implied) continue;
    }
    final_list.push_back(c);
  }
  std::sort(final_list.begin(), final_list.end());
  return final_list;
}

}  // namespace render_detail

inline std::string render_template(const Dag& d, const Clic& k) {
  using namespace render_detail;
  Layout L = make_layout(d, k);
  std::string lhs_body;
  for (size_t g = 0; g < L.slots.size(); ++g) {
    if (g) lhs_body += ",";
    for (int v : L.order)
      if (L.depth[static_cast<size_t>(v)] == static_cast<int>(g)) lhs_body += L.sym[static_cast<size_t>(v)];
  }
  // argument list: one per closed set, deduplicated, ordered by
  // (cardinality, declaration-order vertex sequence)
  std::vector<VSet> sets = d.closed_sets();
  std::sort(sets.begin(), sets.end(), [&](VSet a, VSet b) {
    if (vcount(a) != vcount(b)) return vcount(a) < vcount(b);
    std::vector<int> pa, pb;
    for (VSet t = a; t; t &= t - 1) pa.push_back(d.decl_pos(std::countr_zero(t)));
    for (VSet t = b; t; t &= t - 1) pb.push_back(d.decl_pos(std::countr_zero(t)));
    std::sort(pa.begin(), pa.end());
    std::sort(pb.begin(), pb.end());
    return pa < pb;
  });
  std::vector<std::string> args;
  for (VSet c : sets) {
    std::string a = arg_str(d, L, c);
    if (std::find(args.begin(), args.end(), a) == args.end()) args.push_back(a);
  }
  std::string out = "X" + subscript(lhs_body) + "=f(";
  for (size_t i = 0; i < args.size(); ++i) out += (i ? "," : "") + args[i];
  out += ")";
  auto cons = genericity_constraints(d, k, L);
  if (!cons.empty()) {
    out += "  [";
    for (size_t i = 0; i < cons.size(); ++i) {
      if (i) out += ", ";
      out += tuple_str(cons[i].lhs) + "≠" + tuple_str(cons[i].rhs);
    }
    out += "]";
  }
  return out;
}

}  // namespace dagex

#endif
