#ifndef DAGEX_TEST_FIXTURES_HPP
#define DAGEX_TEST_FIXTURES_HPP

#include "dagex/dagex.hpp"

namespace fx {

using namespace dagex;

// block-matrix graph: u,v above r,c
inline Dag block_matrix() {
  return build_dag({"u", "v", "r", "c"}, {{"u", "r"}, {"u", "c"}, {"v", "r"}, {"v", "c"}});
}

// two parallel chains of lengths 2 and 3
inline Dag ap_graph() {
  return build_dag({"u1", "u2", "v1", "v2", "v3"}, {{"u1", "u2"}, {"v1", "v2"}, {"v2", "v3"}});
}

inline Dag single_vertex() { return build_dag({"a"}, {}); }
inline Dag two_isolated() { return build_dag({"a", "b"}, {}); }
inline Dag three_isolated() { return build_dag({"a", "b", "c"}, {}); }

inline LocalIso iso_of(const Dag& d, const std::vector<std::pair<std::string, std::string>>& pairs) {
  json m = json::object();
  for (const auto& [a, b] : pairs) m[a] = b;
  return iso_from_json(d, json{{"map", m}});
}

inline Clic trivial_clic(const Dag& d) { return clic_closure(d, {}); }

// the three nontrivial block-matrix CLICs, in the case numbering 1..3
inline Clic bm_clic1(const Dag& d) { return clic_closure(d, {iso_of(d, {{"u", "v"}})}); }
inline Clic bm_clic2(const Dag& d) {
  return clic_closure(d, {iso_of(d, {{"u", "u"}, {"v", "v"}, {"r", "c"}})});
}
inline Clic bm_clic3(const Dag& d) {
  return clic_closure(d, {iso_of(d, {{"u", "v"}, {"v", "u"}, {"r", "c"}})});
}

inline Clic ap_clic4(const Dag& d) { return clic_closure(d, {iso_of(d, {{"u1", "v1"}})}); }
inline Clic ap_clic5(const Dag& d) {
  return clic_closure(d, {iso_of(d, {{"u1", "v1"}, {"u2", "v2"}})});
}

inline Clic swap_clic(const Dag& d) { return clic_closure(d, {iso_of(d, {{"a", "b"}})}); }

inline Index idx(const Dag& d, const std::vector<std::pair<std::string, std::uint64_t>>& e) {
  return make_index(d, e);
}

}  // namespace fx

#endif
