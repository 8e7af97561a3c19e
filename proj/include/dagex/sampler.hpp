#ifndef DAGEX_SAMPLER_HPP
#define DAGEX_SAMPLER_HPP

#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <cstring>
#include <functional>
#include <map>
#include <string>
#include <thread>
#include <vector>

#include "dagex/clic.hpp"
#include "dagex/dag.hpp"
#include "dagex/errors.hpp"
#include "dagex/index.hpp"
#include "dagex/permutation.hpp"

namespace dagex {

// Deterministic measurable-function families plugged into the representation.
struct FSpec {
  enum class Kind { Mix, Affine, Threshold, User };
  Kind kind = Kind::Mix;
  std::vector<double> weights;  // affine; cycled if shorter than the tuple
  double level = 0.5;           // threshold
  std::function<double(const std::vector<double>&)> fn;  // user

  static FSpec mix() { return {}; }
  static FSpec affine(std::vector<double> w = {}) {
    FSpec f;
    f.kind = Kind::Affine;
    f.weights = std::move(w);
    return f;
  }
  static FSpec threshold(double level) {
    FSpec f;
    f.kind = Kind::Threshold;
    f.level = level;
    return f;
  }
  static FSpec user(std::function<double(const std::vector<double>&)> fn) {
    FSpec f;
    f.kind = Kind::User;
    f.fn = std::move(fn);
    return f;
  }
};

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline double to_unit(std::uint64_t h) { return static_cast<double>(h >> 11) * 0x1.0p-53; }

inline std::uint64_t hash_bytes(std::uint64_t seed, const std::string& bytes) {
  std::uint64_t h = splitmix64(seed ^ 0x6a09e667f3bcc908ULL);
  for (unsigned char c : bytes) h = splitmix64(h ^ c);
  return splitmix64(h ^ static_cast<std::uint64_t>(bytes.size()));
}

inline std::uint64_t hash_doubles(const std::vector<double>& xs) {
  std::uint64_t h = 0x2545f4914f6cdd1dULL;
  for (double x : xs) {
    std::uint64_t bits;
    std::memcpy(&bits, &x, sizeof bits);
    h = splitmix64(h ^ bits);
  }
  return splitmix64(h ^ static_cast<std::uint64_t>(xs.size()));
}

}  // namespace detail

// Canonical byte encoding of a class key: domain labels, then (vertex,value)
// pairs in label order, every field length- or width-prefixed.
inline std::string encode_key(const Dag& d, const ClassKey& key) {
  std::string out;
  auto put_str = [&out](const std::string& s) {
    out.push_back(static_cast<char>(s.size() & 0xff));
    out += s;
  };
  out.push_back(static_cast<char>(vcount(key.rep.dom)));
  for (VSet t = key.rep.dom; t; t &= t - 1) put_str(d.label(std::countr_zero(t)));
  for (VSet t = key.rep.dom; t; t &= t - 1) {
    int v = std::countr_zero(t);
    put_str(d.label(v));
    std::uint64_t val = key.rep.at(v);
    for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((val >> (8 * i)) & 0xff));
  }
  return out;
}

// PRF uniform attached to a canonical class key; identical keys always
// collide, and that collision is the representation's merging.
inline double uniform_for(std::uint64_t seed, const Dag& d, const ClassKey& key) {
  return detail::to_unit(detail::hash_bytes(seed, encode_key(d, key)));
}

inline double eval_f(const FSpec& f, const std::vector<double>& args) {
  switch (f.kind) {
    case FSpec::Kind::Mix:
      return detail::to_unit(detail::hash_doubles(args));
    case FSpec::Kind::Affine: {
      double s = 0;
      for (size_t i = 0; i < args.size(); ++i) {
        double w = f.weights.empty() ? 1.0 : f.weights[i % f.weights.size()];
        s += w * args[i];
      }
      return s - std::floor(s);
    }
    case FSpec::Kind::Threshold:
      return detail::to_unit(detail::hash_doubles(args)) < f.level ? 1.0 : 0.0;
    case FSpec::Kind::User:
      return f.fn(args);
  }
  return 0;
}

struct SampleSpec {
  const Dag* dag = nullptr;
  const Clic* clic = nullptr;
  int box = 1;
  FSpec f;
  std::uint64_t seed = 0;
};

struct ArrayBundle {
  std::vector<std::pair<Index, double>> entries;  // sorted by index
  std::map<ClassKey, double> latents;             // key -> uniform
  std::map<ClassKey, double> cascade;             // key -> latent S (cascade mode)
  int box = 0;
  std::uint64_t seed = 0;

  const double* find(const Index& a) const {
    auto it = std::lower_bound(entries.begin(), entries.end(), a,
                               [](const auto& e, const Index& x) { return e.first < x; });
    if (it == entries.end() || !(it->first == a)) return nullptr;
    return &it->second;
  }
};

// All full generic indices with values < box.
inline std::vector<Index> generic_box(const Dag& d, const Clic& k, int box) {
  std::vector<Index> all;
  detail::enum_assignments(d, d.full_mask(), box, all);
  std::vector<Index> out;
  for (auto& a : all)
    if (is_generic(d, k, a)) out.push_back(std::move(a));
  return out;
}

// Class keys of the argument tuple for one entry, in the A_G well-order of
// the restriction's source subgraph.
inline std::vector<ClassKey> entry_keys(const Dag& d, const Clic& k, const Index& a, KeyCache* cache) {
  std::vector<ClassKey> keys;
  keys.reserve(d.closed_sets().size());
  for (VSet c : d.closed_sets()) keys.push_back(class_key(d, k, restrict(d, a, c), cache));
  return keys;
}

// Single-entry evaluation with a caller-chosen uniform source per key.
inline double eval_entry(const Dag& d, const FSpec& f, const std::vector<ClassKey>& keys,
                         const std::function<double(const ClassKey&)>& uniform) {
  std::vector<double> args;
  args.reserve(keys.size());
  for (const auto& key : keys) args.push_back(uniform(key));
  return eval_f(f, args);
}

inline int worker_count() {
  if (const char* env = std::getenv("DAGEX_THREADS")) {
    int n = std::atoi(env);
    if (n >= 1) return n;
  }
  return 1;
}

inline ArrayBundle generate_array(const SampleSpec& spec, KeyCache* cache = nullptr) {
  const Dag& d = *spec.dag;
  const Clic& k = *spec.clic;
  KeyCache local;
  if (!cache) cache = &local;
  std::vector<Index> idx = generic_box(d, k, spec.box);
  if (idx.empty()) fail(Errc::EmptyIndexSet, "no generic index exists in the box");

  ArrayBundle b;
  b.box = spec.box;
  b.seed = spec.seed;
  std::vector<std::vector<ClassKey>> keys(idx.size());
  for (size_t i = 0; i < idx.size(); ++i) keys[i] = entry_keys(d, k, idx[i], cache);

  b.entries.resize(idx.size());
  int nw = worker_count();
  auto run = [&](size_t lo, size_t hi) {
    for (size_t i = lo; i < hi; ++i) {
      std::vector<double> args;
      args.reserve(keys[i].size());
      for (const auto& key : keys[i]) args.push_back(uniform_for(spec.seed, d, key));
      b.entries[i] = {idx[i], eval_f(spec.f, args)};
    }
  };
  if (nw <= 1) {
    run(0, idx.size());
  } else {
    std::vector<std::thread> ts;
    size_t chunk = (idx.size() + static_cast<size_t>(nw) - 1) / static_cast<size_t>(nw);
    for (int w = 0; w < nw; ++w) {
      size_t lo = static_cast<size_t>(w) * chunk, hi = std::min(idx.size(), lo + chunk);
      if (lo < hi) ts.emplace_back(run, lo, hi);
    }
    for (auto& t : ts) t.join();
  }
  for (const auto& ks : keys)
    for (const auto& key : ks) b.latents.emplace(key, uniform_for(spec.seed, d, key));
  return b;
}

// Hierarchical cascade: latents per class key by increasing domain size, entries
// read off the full-domain latent through the configured f.
inline ArrayBundle generate_cascade(const SampleSpec& spec, const std::vector<FSpec>& per_level_f,
                                    KeyCache* cache = nullptr) {
  const Dag& d = *spec.dag;
  const Clic& k = *spec.clic;
  KeyCache local;
  if (!cache) cache = &local;
  if (per_level_f.size() != static_cast<size_t>(d.n()) + 1)
    fail(Errc::ParseError, "cascade needs one f per domain size 0..|V|");
  std::vector<Index> idx = generic_box(d, k, spec.box);
  if (idx.empty()) fail(Errc::EmptyIndexSet, "no generic index exists in the box");

  std::set<ClassKey> keyset;
  for (const auto& a : idx)
    for (const auto& key : restr_class_keys(d, k, a, cache)) keyset.insert(key);
  std::vector<ClassKey> order(keyset.begin(), keyset.end());
  std::stable_sort(order.begin(), order.end(), [](const ClassKey& a, const ClassKey& b) {
    return vcount(a.rep.dom) < vcount(b.rep.dom);
  });

  ArrayBundle b;
  b.box = spec.box;
  b.seed = spec.seed;
  for (const auto& key : order) {
    std::vector<double> args;
    for (const auto& p : restr_prime_class_keys(d, k, key.rep, cache)) args.push_back(b.cascade.at(p));
    double u = uniform_for(spec.seed, d, key);
    b.latents.emplace(key, u);
    args.push_back(u);
    b.cascade.emplace(key, eval_f(per_level_f[static_cast<size_t>(vcount(key.rep.dom))], args));
  }
  b.entries.reserve(idx.size());
  for (const auto& a : idx) {
    double s = b.cascade.at(class_key(d, k, a, cache));
    b.entries.emplace_back(a, eval_f(spec.f, {s}));
  }
  return b;
}

inline ArrayBundle pushforward(const Dag& d, const Clic& k, const ArrayBundle& b,
                               const GPermutation& t) {
  if (!is_k_commuting(d, k, t, b.box)) fail(Errc::NotKCommuting, "pushforward requires a K-commuting permutation");
  ArrayBundle out = b;
  for (auto& [a, x] : out.entries) {
    const double* src = b.find(apply(d, t, a));
    if (!src) fail(Errc::ImageOutsideBox, "permutation image leaves the materialized box");
    x = *src;
  }
  return out;
}

}  // namespace dagex

#endif
