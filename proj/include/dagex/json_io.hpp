#ifndef DAGEX_JSON_IO_HPP
#define DAGEX_JSON_IO_HPP

#include <cstdio>
#include <string>
#include <vector>

#include <json.hpp>

#include "dagex/clic.hpp"
#include "dagex/dag.hpp"
#include "dagex/errors.hpp"
#include "dagex/index.hpp"
#include "dagex/permutation.hpp"
#include "dagex/sampler.hpp"
#include "dagex/stats.hpp"

namespace dagex {

using json = nlohmann::json;

inline std::string fmt_real(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

// --- graph ---------------------------------------------------------------

inline Dag dag_from_json(const json& j) {
  if (!j.is_object() || !j.contains("vertices") || !j.contains("edges"))
    fail(Errc::ParseError, "graph JSON needs \"vertices\" and \"edges\"");
  std::vector<std::string> vs;
  for (const auto& v : j.at("vertices")) vs.push_back(v.get<std::string>());
  std::vector<std::pair<std::string, std::string>> es;
  for (const auto& e : j.at("edges")) {
    if (!e.is_array() || e.size() != 2) fail(Errc::ParseError, "edge must be a pair");
    es.emplace_back(e[0].get<std::string>(), e[1].get<std::string>());
  }
  return build_dag(vs, es);
}

inline json dag_to_json(const Dag& d) {
  json j;
  j["vertices"] = d.labels();
  json es = json::array();
  for (auto [u, v] : d.edges()) es.push_back({d.label(u), d.label(v)});
  j["edges"] = es;
  return j;
}

// --- local isos / CLIC ---------------------------------------------------

inline LocalIso iso_from_json(const Dag& d, const json& j) {
  if (!j.is_object() || !j.contains("map")) fail(Errc::ParseError, "iso JSON needs \"map\"");
  std::vector<std::pair<int, int>> pairs;
  VSet src = 0;
  for (const auto& [from, to] : j.at("map").items()) {
    int a = d.id_of(from), b = d.id_of(to.get<std::string>());
    pairs.emplace_back(a, b);
    src |= vbit(a);
  }
  LocalIso k;
  k.map.assign(static_cast<size_t>(d.n()), -1);
  for (auto [a, b] : pairs) k.map[static_cast<size_t>(a)] = b;
  k.src = src;
  // apex: the unique maximum of the domain
  k.apex_src = -1;
  for (VSet t = src; t; t &= t - 1) {
    int v = std::countr_zero(t);
    bool maximal = true;
    for (VSet u = src; u; u &= u - 1)
      if (d.lt(v, std::countr_zero(u))) maximal = false;
    if (maximal) {
      if (k.apex_src != -1) fail(Errc::MalformedIso, "iso domain has more than one maximal vertex");
      k.apex_src = v;
    }
  }
  if (k.apex_src < 0) fail(Errc::MalformedIso, "iso domain is empty");
  k.apex_dst = k.map[static_cast<size_t>(k.apex_src)];
  k.dst = 0;
  for (auto [a, b] : pairs) {
    (void)a;
    k.dst |= vbit(b);
  }
  if (!well_formed_iso(d, k)) fail(Errc::MalformedIso, "map is not a local isomorphism");
  return k;
}

inline json iso_to_json(const Dag& d, const LocalIso& k) {
  json m = json::object();
  for (VSet t = k.src; t; t &= t - 1) {
    int v = std::countr_zero(t);
    m[d.label(v)] = d.label(k(v));
  }
  return json{{"map", m}};
}

// Accepts {"isos":[...]} (validated, identities added) or
// {"generators":[...]} (closed). Emits the full member list.
inline Clic clic_from_json(const Dag& d, const json& j) {
  if (!j.is_object()) fail(Errc::ParseError, "CLIC JSON must be an object");
  std::vector<LocalIso> isos;
  if (j.contains("generators")) {
    for (const auto& e : j.at("generators")) isos.push_back(iso_from_json(d, e));
    return clic_closure(d, isos);
  }
  if (!j.contains("isos")) fail(Errc::ParseError, "CLIC JSON needs \"isos\" or \"generators\"");
  for (const auto& e : j.at("isos")) isos.push_back(iso_from_json(d, e));
  for (int v = 0; v < d.n(); ++v) {
    LocalIso id = identity_iso(d, v);
    if (std::find(isos.begin(), isos.end(), id) == isos.end()) isos.push_back(id);
  }
  auto violations = validate_clic(d, isos);
  if (!violations.empty())
    fail(Errc::MalformedIso, "not a CLIC: " + violations.front().axiom + ": " + violations.front().detail);
  Clic c;
  c.isos = std::move(isos);
  std::sort(c.isos.begin(), c.isos.end());
  return c;
}

inline json clic_to_json(const Dag& d, const Clic& c) {
  json isos = json::array();
  for (const auto& k : c.isos) isos.push_back(iso_to_json(d, k));
  return json{{"isos", isos}};
}

// --- indices -------------------------------------------------------------

inline Index index_from_json(const Dag& d, const json& j) {
  if (!j.is_object() || !j.contains("dom") || !j.contains("vals"))
    fail(Errc::ParseError, "index JSON needs \"dom\" and \"vals\"");
  std::vector<std::pair<std::string, std::uint64_t>> entries;
  for (const auto& v : j.at("dom"))
    entries.emplace_back(v.get<std::string>(), j.at("vals").at(v.get<std::string>()).get<std::uint64_t>());
  return make_index(d, entries);
}

inline json index_to_json(const Dag& d, const Index& a) {
  json vals = json::object();
  json dom = json::array();
  for (VSet t = a.dom; t; t &= t - 1) {
    int v = std::countr_zero(t);
    dom.push_back(d.label(v));
    vals[d.label(v)] = a.at(v);
  }
  return json{{"dom", dom}, {"vals", vals}};
}

// --- permutations --------------------------------------------------------

inline GPermutation gperm_from_json(const Dag& d, const json& j) {
  if (!j.is_object() || !j.contains("box") || !j.contains("tables"))
    fail(Errc::ParseError, "permutation JSON needs \"box\" and \"tables\"");
  GPermutation t = GPermutation::identity(d, j.at("box").get<int>());
  for (const auto& [lbl, rows] : j.at("tables").items()) {
    int v = d.id_of(lbl);
    for (const auto& row : rows) {
      std::vector<std::pair<std::string, std::uint64_t>> ctx_entries;
      for (const auto& [cl, cv] : row.at("ctx").items()) ctx_entries.emplace_back(cl, cv.get<std::uint64_t>());
      Index ctx = make_index(d, ctx_entries);
      if (ctx.dom != (d.closure_mask(v) & ~vbit(v)))
        fail(Errc::ParseError, "ctx must cover exactly C_v minus v");
      std::vector<std::uint32_t> perm = row.at("perm").get<std::vector<std::uint32_t>>();
      if (perm.size() != static_cast<size_t>(t.box)) fail(Errc::ParseError, "perm length must equal box");
      std::vector<bool> seen(perm.size(), false);
      for (auto x : perm) {
        if (x >= perm.size() || seen[x]) fail(Errc::ParseError, "perm is not a bijection of the box");
        seen[x] = true;
      }
      t.tables[static_cast<size_t>(v)][ctx] = std::move(perm);
    }
  }
  return t;
}

inline json gperm_to_json(const Dag& d, const GPermutation& t) {
  json tables = json::object();
  for (int v = 0; v < d.n(); ++v) {
    if (t.tables[static_cast<size_t>(v)].empty()) continue;
    json rows = json::array();
    for (const auto& [ctx, perm] : t.tables[static_cast<size_t>(v)]) {
      json cj = json::object();
      for (VSet m = ctx.dom; m; m &= m - 1) {
        int u = std::countr_zero(m);
        cj[d.label(u)] = ctx.at(u);
      }
      rows.push_back({{"ctx", cj}, {"perm", perm}});
    }
    tables[d.label(v)] = rows;
  }
  return json{{"box", t.box}, {"tables", tables}};
}

// --- reports -------------------------------------------------------------

inline json report_to_json(const TestReport& r) {
  return json{{"test", r.name}, {"stat", r.stat}, {"tol", r.tol},
              {"pass", r.pass}, {"n", r.replicates}, {"seeds", r.seeds}};
}

// --- bundle (custom writer: reals as 17-significant-digit decimals) ------

inline std::string bundle_to_json_text(const Dag& d, const SampleSpec& spec, const ArrayBundle& b,
                                       bool with_latents) {
  std::string out = "{\"spec\":{\"graph\":" + dag_to_json(d).dump() +
                    ",\"box\":" + std::to_string(spec.box) +
                    ",\"seed\":" + std::to_string(spec.seed) + "},\"entries\":[";
  bool first = true;
  for (const auto& [a, x] : b.entries) {
    if (!first) out += ",";
    first = false;
    out += "{\"index\":" + index_to_json(d, a).dump() + ",\"x\":" + fmt_real(x) + "}";
  }
  out += "]";
  if (with_latents) {
    out += ",\"latents\":[";
    first = true;
    for (const auto& [key, u] : b.latents) {
      if (!first) out += ",";
      first = false;
      out += "{\"key\":" + index_to_json(d, key.rep).dump() + ",\"u\":" + fmt_real(u) + "}";
    }
    out += "]";
  }
  out += "}";
  return out;
}

}  // namespace dagex

#endif
