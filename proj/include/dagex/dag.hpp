#ifndef DAGEX_DAG_HPP
#define DAGEX_DAG_HPP

#include <algorithm>
#include <bit>
#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "dagex/errors.hpp"

namespace dagex {

// Vertex subsets as bitmasks over internal ids (ids assigned in lexicographic
// label order, so mask iteration order == label order).
using VSet = std::uint32_t;

inline int vcount(VSet s) { return std::popcount(s); }
inline VSet vbit(int v) { return VSet{1} << v; }
inline bool vhas(VSet s, int v) { return (s >> v) & 1; }

// Canonical well-order on vertex sets: cardinality first, then lexicographic
// on the ascending id sequence.
inline bool vset_wellorder_less(VSet a, VSet b) {
  if (a == b) return false;
  int ca = vcount(a), cb = vcount(b);
  if (ca != cb) return ca < cb;
  while (a && b) {
    int ia = std::countr_zero(a), ib = std::countr_zero(b);
    if (ia != ib) return ia < ib;
    a &= a - 1;
    b &= b - 1;
  }
  return false;
}

// Finite simple DAG. Stores the transitive reduction of the input edges and
// the derived reachability order. Immutable after build_dag.
class Dag {
 public:
  int n() const { return static_cast<int>(labels_.size()); }
  const std::vector<std::string>& labels() const { return labels_; }
  const std::string& label(int v) const { return labels_[static_cast<size_t>(v)]; }

  int id_of(const std::string& lbl) const {
    auto it = std::lower_bound(labels_.begin(), labels_.end(), lbl);
    if (it == labels_.end() || *it != lbl)
      fail(Errc::UnknownVertex, "unknown vertex: " + lbl);
    return static_cast<int>(it - labels_.begin());
  }
  bool has_label(const std::string& lbl) const {
    return std::binary_search(labels_.begin(), labels_.end(), lbl);
  }

  // u strictly precedes v in the reachability order.
  bool lt(int u, int v) const { return u != v && vhas(closure_[static_cast<size_t>(v)], u); }
  // u == v or u precedes v.
  bool leq(int u, int v) const { return vhas(closure_[static_cast<size_t>(v)], u); }

  // C_v: v together with everything below it.
  VSet closure_mask(int v) const { return closure_[static_cast<size_t>(v)]; }
  VSet full_mask() const { return n() == 32 ? ~VSet{0} : vbit(n()) - 1; }

  // Transitive-reduction edges, canonically ordered.
  const std::vector<std::pair<int, int>>& edges() const { return edges_; }
  bool reduction_removed_edges() const { return reduction_removed_; }

  // A_G in the canonical well-order (includes the empty set and V).
  const std::vector<VSet>& closed_sets() const { return closed_sets_; }

  bool is_closed(VSet s) const {
    VSet want = 0;
    for (VSet t = s; t; t &= t - 1) want |= closure_[static_cast<size_t>(std::countr_zero(t))];
    return want == s;
  }

  // Position of v in the declaration (input) order; used only for rendering.
  int decl_pos(int v) const { return decl_pos_[static_cast<size_t>(v)]; }

  friend Dag build_dag(const std::vector<std::string>& vertices,
                       const std::vector<std::pair<std::string, std::string>>& edges);

 private:
  std::vector<std::string> labels_;
  std::vector<int> decl_pos_;
  std::vector<VSet> closure_;
  std::vector<std::pair<int, int>> edges_;
  std::vector<VSet> closed_sets_;
  bool reduction_removed_ = false;
};

inline Dag build_dag(const std::vector<std::string>& vertices,
                     const std::vector<std::pair<std::string, std::string>>& edges) {
  if (vertices.size() > 32) fail(Errc::TooManyIsos, "at most 32 vertices supported");
  Dag d;
  d.labels_ = vertices;
  std::sort(d.labels_.begin(), d.labels_.end());
  if (std::adjacent_find(d.labels_.begin(), d.labels_.end()) != d.labels_.end())
    fail(Errc::DuplicateVertex, "duplicate vertex label");
  const int n = d.n();
  d.decl_pos_.assign(static_cast<size_t>(n), 0);
  for (size_t i = 0; i < vertices.size(); ++i) d.decl_pos_[static_cast<size_t>(d.id_of(vertices[i]))] = static_cast<int>(i);

  std::vector<std::vector<bool>> adj(static_cast<size_t>(n), std::vector<bool>(static_cast<size_t>(n), false));
  for (const auto& [a, b] : edges) {
    if (!d.has_label(a)) fail(Errc::UnknownVertex, "edge endpoint not declared: " + a);
    if (!d.has_label(b)) fail(Errc::UnknownVertex, "edge endpoint not declared: " + b);
    adj[static_cast<size_t>(d.id_of(a))][static_cast<size_t>(d.id_of(b))] = true;
  }

  // reach = strict transitive closure (Floyd-Warshall)
  auto reach = adj;
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      if (reach[static_cast<size_t>(i)][static_cast<size_t>(k)])
        for (int j = 0; j < n; ++j)
          if (reach[static_cast<size_t>(k)][static_cast<size_t>(j)]) reach[static_cast<size_t>(i)][static_cast<size_t>(j)] = true;
  for (int v = 0; v < n; ++v)
    if (reach[static_cast<size_t>(v)][static_cast<size_t>(v)]) fail(Errc::CycleDetected, "input edges contain a cycle");

  d.closure_.assign(static_cast<size_t>(n), 0);
  for (int v = 0; v < n; ++v) {
    VSet c = vbit(v);
    for (int u = 0; u < n; ++u)
      if (reach[static_cast<size_t>(u)][static_cast<size_t>(v)]) c |= vbit(u);
    d.closure_[static_cast<size_t>(v)] = c;
  }

  // transitive reduction: keep (u,w) iff no v with u < v < w
  for (int u = 0; u < n; ++u)
    for (int w = 0; w < n; ++w) {
      if (!reach[static_cast<size_t>(u)][static_cast<size_t>(w)]) continue;
      bool covered = false;
      for (int v = 0; v < n && !covered; ++v)
        if (v != u && v != w && reach[static_cast<size_t>(u)][static_cast<size_t>(v)] && reach[static_cast<size_t>(v)][static_cast<size_t>(w)])
          covered = true;
      if (!covered)
        d.edges_.emplace_back(u, w);
      else if (adj[static_cast<size_t>(u)][static_cast<size_t>(w)])
        d.reduction_removed_ = true;
    }
  std::sort(d.edges_.begin(), d.edges_.end());

  // enumerate downsets
  VSet full = d.full_mask();
  if (n <= 20) {
    for (VSet s = 0;; ++s) {
      if (d.is_closed(s)) d.closed_sets_.push_back(s);
      if (s == full) break;
    }
  } else {
    fail(Errc::TooManyIsos, "downset enumeration limited to 20 vertices");
  }
  std::sort(d.closed_sets_.begin(), d.closed_sets_.end(), vset_wellorder_less);
  return d;
}

inline VSet mask_of(const Dag& d, const std::vector<std::string>& lbls) {
  VSet s = 0;
  for (const auto& l : lbls) s |= vbit(d.id_of(l));
  return s;
}

inline std::vector<std::string> labels_of(const Dag& d, VSet s) {
  std::vector<std::string> out;
  for (VSet t = s; t; t &= t - 1) out.push_back(d.label(std::countr_zero(t)));
  return out;
}

inline VSet closure_of(const Dag& d, int v) {
  if (v < 0 || v >= d.n()) fail(Errc::UnknownVertex, "vertex id out of range");
  return d.closure_mask(v);
}

}  // namespace dagex

#endif
