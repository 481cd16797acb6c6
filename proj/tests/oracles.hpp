#pragma once

// Independent brute-force references used by the tests. Nothing here calls
// the subgroup machinery of the library: subgroups are found by testing
// every subset of the right size for closure.

#include <algorithm>
#include <set>
#include <vector>

#include "orbicover/group_core.hpp"

namespace oracle {

using orbicover::ElementId;
using orbicover::FiniteGroup;

inline bool closed(const FiniteGroup& g, const std::vector<ElementId>& s) {
  std::vector<char> in(g.order(), 0);
  for (auto x : s) in[x] = 1;
  for (auto x : s) {
    for (auto y : s) {
      if (!in[g.multiply(x, y)]) return false;
    }
  }
  return true;
}

/// All subgroups as sorted member lists, by checking every subset that
/// contains the identity and whose size divides the order.
inline std::vector<std::vector<ElementId>> subgroups_by_subsets(const FiniteGroup& g) {
  const std::size_t n = g.order();
  std::vector<std::vector<ElementId>> out;
  for (std::size_t d = 1; d <= n; ++d) {
    if (n % d != 0) continue;
    // choose d-1 of the n-1 non-identity elements
    const std::size_t k = d - 1;
    std::vector<std::size_t> idx(k);
    for (std::size_t t = 0; t < k; ++t) idx[t] = t;
    while (true) {
      std::vector<ElementId> s = {0};
      for (auto t : idx) s.push_back(t + 1);
      if (closed(g, s)) out.push_back(s);
      // next combination
      std::size_t t = k;
      while (t > 0 && idx[t - 1] == n - 1 - k + (t - 1)) --t;
      if (t == 0) break;
      ++idx[t - 1];
      for (std::size_t u = t; u < k; ++u) idx[u] = idx[u - 1] + 1;
    }
  }
  return out;
}

inline std::vector<ElementId> conjugated(const FiniteGroup& g, const std::vector<ElementId>& h,
                                         ElementId x) {
  std::vector<ElementId> out;
  for (auto y : h) out.push_back(g.conjugate(x, y));
  std::sort(out.begin(), out.end());
  return out;
}

inline std::size_t conjugacy_class_count(const FiniteGroup& g) {
  auto subs = subgroups_by_subsets(g);
  std::set<std::vector<ElementId>> seen;
  std::size_t classes = 0;
  for (const auto& h : subs) {
    if (seen.count(h)) continue;
    ++classes;
    for (ElementId x = 0; x < g.order(); ++x) seen.insert(conjugated(g, h, x));
  }
  return classes;
}

/// Elements normalizing h, by testing x h x^-1 == h for each x.
inline std::vector<ElementId> normalizer(const FiniteGroup& g, const std::vector<ElementId>& h) {
  std::vector<ElementId> out;
  for (ElementId x = 0; x < g.order(); ++x) {
    if (conjugated(g, h, x) == h) out.push_back(x);
  }
  return out;
}

/// Double cosets h2 g h1 by direct enumeration.
inline std::vector<std::vector<ElementId>> double_cosets(const FiniteGroup& g,
                                                         const std::vector<ElementId>& h1,
                                                         const std::vector<ElementId>& h2) {
  std::vector<char> done(g.order(), 0);
  std::vector<std::vector<ElementId>> out;
  for (ElementId x = 0; x < g.order(); ++x) {
    if (done[x]) continue;
    std::set<ElementId> d;
    for (auto a : h2) {
      for (auto b : h1) d.insert(g.multiply(g.multiply(a, x), b));
    }
    for (auto y : d) done[y] = 1;
    out.emplace_back(d.begin(), d.end());
  }
  return out;
}

inline bool contains_all(const std::vector<ElementId>& big, const std::vector<ElementId>& small) {
  return std::includes(big.begin(), big.end(), small.begin(), small.end());
}

}  // namespace oracle
