#ifndef DAGEX_STATS_HPP
#define DAGEX_STATS_HPP

#include <cmath>
#include <cstdint>
#include <functional>
#include <set>
#include <string>
#include <vector>

#include "dagex/errors.hpp"
#include "dagex/index.hpp"
#include "dagex/permutation.hpp"
#include "dagex/sampler.hpp"

namespace dagex {

struct TestReport {
  std::string name;
  double stat = 0;
  double tol = 0;
  bool pass = false;
  int replicates = 0;
  std::vector<std::uint64_t> seeds;  // base seeds used
};

namespace detail {

// compensated summation so parallel/serial reductions agree to reported precision
struct KahanSum {
  double s = 0, c = 0;
  void add(double x) {
    double y = x - c;
    double t = s + y;
    c = (t - s) - y;
    s = t;
  }
  double value() const { return s; }
};

}  // namespace detail

using Statistic = std::function<double(const std::vector<double>&)>;

inline Statistic mean_statistic() {
  return [](const std::vector<double>& xs) {
    double s = 0;
    for (double x : xs) s += x;
    return xs.empty() ? 0.0 : s / static_cast<double>(xs.size());
  };
}

// Invariance check: the Monte Carlo law of g at a pattern matches g at the
// tau-image of the pattern, within 4 standard errors of the paired mean.
inline TestReport invariance_test(const SampleSpec& spec, const GPermutation& tau,
                                  const std::vector<Index>& pattern, const Statistic& g,
                                  int replicates, KeyCache* cache = nullptr) {
  const Dag& d = *spec.dag;
  const Clic& k = *spec.clic;
  KeyCache local;
  if (!cache) cache = &local;
  if (!is_k_commuting(d, k, tau, spec.box))
    fail(Errc::NotKCommuting, "invariance_test requires a K-commuting permutation");

  std::vector<std::vector<ClassKey>> keys, tkeys;
  for (const auto& a : pattern) {
    if (!is_generic(d, k, a)) fail(Errc::NotGeneric, "pattern index not generic");
    Index img = apply(d, tau, a);
    for (VSet t = img.dom; t; t &= t - 1)
      if (img.at(std::countr_zero(t)) >= static_cast<std::uint64_t>(spec.box))
        fail(Errc::ImageOutsideBox, "tau maps the pattern outside the box");
    keys.push_back(entry_keys(d, k, a, cache));
    tkeys.push_back(entry_keys(d, k, img, cache));
  }

  detail::KahanSum sum, sumsq;
  for (int r = 0; r < replicates; ++r) {
    std::uint64_t seed = detail::splitmix64(spec.seed + static_cast<std::uint64_t>(r));
    auto uni = [&](const ClassKey& key) { return uniform_for(seed, d, key); };
    std::vector<double> xs, txs;
    for (size_t i = 0; i < pattern.size(); ++i) {
      xs.push_back(eval_entry(d, spec.f, keys[i], uni));
      txs.push_back(eval_entry(d, spec.f, tkeys[i], uni));
    }
    double diff = g(xs) - g(txs);
    sum.add(diff);
    sumsq.add(diff * diff);
  }
  double n = static_cast<double>(replicates);
  double mean = sum.value() / n;
  double var = std::max(0.0, sumsq.value() / n - mean * mean);
  TestReport rep;
  rep.name = "invariance";
  rep.stat = mean;
  rep.tol = 4.0 * std::sqrt(var / n);
  rep.pass = std::fabs(rep.stat) <= rep.tol;
  rep.replicates = replicates;
  rep.seeds = {spec.seed};
  return rep;
}

// Prop 2.10 surrogate: freeze the uniforms on the shared class keys of two
// entries, resample the rest, and require ~zero empirical correlation.
inline TestReport cond_indep_test(const SampleSpec& spec, const Index& a, const Index& b,
                                  int replicates, KeyCache* cache = nullptr) {
  const Dag& d = *spec.dag;
  const Clic& k = *spec.clic;
  KeyCache local;
  if (!cache) cache = &local;
  if (!is_generic(d, k, a) || !is_generic(d, k, b))
    fail(Errc::NotGeneric, "cond_indep_test requires generic indices");
  if (class_key(d, k, a, cache) == class_key(d, k, b, cache))
    fail(Errc::SameClass, "indices share a class; their entries coincide");

  auto ka = restr_class_keys(d, k, a, cache);
  auto kb = restr_class_keys(d, k, b, cache);
  std::set<ClassKey> shared;
  for (const auto& x : ka)
    for (const auto& y : kb)
      if (x == y) shared.insert(x);

  std::vector<ClassKey> keys_a = entry_keys(d, k, a, cache);
  std::vector<ClassKey> keys_b = entry_keys(d, k, b, cache);

  detail::KahanSum sa, sb, saa, sbb, sab;
  for (int r = 0; r < replicates; ++r) {
    std::uint64_t seed = detail::splitmix64(spec.seed + 0x9e3779b9ULL + static_cast<std::uint64_t>(r));
    auto uni = [&](const ClassKey& key) {
      return uniform_for(shared.count(key) ? spec.seed : seed, d, key);
    };
    double xa = eval_entry(d, spec.f, keys_a, uni);
    double xb = eval_entry(d, spec.f, keys_b, uni);
    sa.add(xa);
    sb.add(xb);
    saa.add(xa * xa);
    sbb.add(xb * xb);
    sab.add(xa * xb);
  }
  double n = static_cast<double>(replicates);
  double ma = sa.value() / n, mb = sb.value() / n;
  double va = saa.value() / n - ma * ma, vb = sbb.value() / n - mb * mb;
  double cov = sab.value() / n - ma * mb;
  double corr = (va > 0 && vb > 0) ? cov / std::sqrt(va * vb) : 0.0;
  TestReport rep;
  rep.name = "cond_indep";
  rep.stat = corr;
  rep.tol = 4.0 / std::sqrt(n);
  rep.pass = std::fabs(rep.stat) <= rep.tol;
  rep.replicates = replicates;
  rep.seeds = {spec.seed};
  return rep;
}

// Exact combinatorial check: a K-commuting tau respects the class structure
// on the whole box, and class keys of images depend only on class keys.
inline bool equivariance_check(const Dag& d, const Clic& k, const GPermutation& tau, int box,
                               KeyCache* cache = nullptr) {
  KeyCache local;
  if (!cache) cache = &local;
  if (!is_k_commuting(d, k, tau, box))
    fail(Errc::NotKCommuting, "equivariance_check requires a K-commuting permutation");
  std::vector<Index> idx = generic_box(d, k, box);
  std::vector<ClassKey> key(idx.size()), ikey(idx.size());
  for (size_t i = 0; i < idx.size(); ++i) {
    key[i] = class_key(d, k, idx[i], cache);
    Index img = apply(d, tau, idx[i]);
    if (!is_generic(d, k, img)) return false;
    ikey[i] = class_key(d, k, img, cache);
  }
  std::map<ClassKey, ClassKey> induced;
  for (size_t i = 0; i < idx.size(); ++i) {
    auto [it, fresh] = induced.emplace(key[i], ikey[i]);
    if (!fresh && !(it->second == ikey[i])) return false;
  }
  for (size_t i = 0; i < idx.size(); ++i)
    for (size_t j = i + 1; j < idx.size(); ++j)
      if ((key[i] == key[j]) != (ikey[i] == ikey[j])) return false;
  return true;
}

}  // namespace dagex

#endif
