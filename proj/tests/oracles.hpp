#pragma once

// Slow reference implementations used to cross-check the library. They share
// no code with it beyond the public types.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <map>
#include <set>
#include <utility>
#include <vector>

#include "ufarch/lattice.hpp"
#include "ufarch/noise.hpp"

namespace oracle {

constexpr long kLeft = -1;
constexpr long kRight = -2;

inline long vid(int d, int layer, int row, int col) {
  return (static_cast<long>(layer) * d + row) * (d - 1) + col;
}

// Edge list of the decoding graph in id order, built from coordinates.
inline std::vector<std::pair<long, long>> edges(int d) {
  std::vector<std::pair<long, long>> out;
  for (int l = 0; l < d; ++l) {
    for (int r = 0; r < d; ++r) {
      out.emplace_back(vid(d, l, r, 0), kLeft);
      for (int c = 1; c < d - 1; ++c) out.emplace_back(vid(d, l, r, c - 1), vid(d, l, r, c));
      out.emplace_back(vid(d, l, r, d - 2), kRight);
      if (r + 1 < d) {
        for (int c = 0; c < d - 1; ++c) out.emplace_back(vid(d, l, r, c), vid(d, l, r + 1, c));
      }
    }
  }
  for (int l = 0; l + 1 < d; ++l) {
    for (int r = 0; r < d; ++r) {
      for (int c = 0; c < d - 1; ++c) out.emplace_back(vid(d, l, r, c), vid(d, l + 1, r, c));
    }
  }
  return out;
}

// Defect set of an edge set: vertices touched an odd number of times.
inline std::vector<long> syndrome(int d, const std::vector<std::size_t>& faults) {
  const auto es = edges(d);
  std::map<long, int> deg;
  for (std::size_t e : faults) {
    deg[es[e].first] ^= 1;
    if (es[e].second >= 0) deg[es[e].second] ^= 1;
  }
  std::vector<long> out;
  for (auto [v, k] : deg) {
    if (k) out.push_back(v);
  }
  return out;
}

// Cluster growth without union-find: components are recomputed from scratch
// every pass by flood fill over fully grown edges.
struct Growth {
  std::vector<std::uint8_t> state;          // per edge
  std::set<long> active;
  std::vector<std::vector<long>> clusters;  // ascending members, ordered by min
  std::vector<bool> odd;
  std::vector<bool> boundary;
  int passes = 0;
};

inline void components(int d, const std::vector<std::pair<long, long>>& es,
                       const std::set<long>& defects, Growth& g) {
  std::map<long, std::vector<std::size_t>> inc;
  for (std::size_t e = 0; e < es.size(); ++e) {
    inc[es[e].first].push_back(e);
    if (es[e].second >= 0) inc[es[e].second].push_back(e);
  }
  g.clusters.clear();
  g.odd.clear();
  g.boundary.clear();
  std::set<long> seen;
  for (long s : g.active) {
    if (seen.count(s)) continue;
    std::vector<long> comp{s}, todo{s};
    seen.insert(s);
    bool bnd = false;
    int par = 0;
    while (!todo.empty()) {
      long x = todo.back();
      todo.pop_back();
      if (defects.count(x)) par ^= 1;
      for (std::size_t e : inc[x]) {
        if (g.state[e] != 2) continue;
        long y = es[e].first == x ? es[e].second : es[e].first;
        if (y < 0) {
          bnd = true;
          continue;
        }
        if (!seen.count(y)) {
          seen.insert(y);
          comp.push_back(y);
          todo.push_back(y);
        }
      }
    }
    std::sort(comp.begin(), comp.end());
    g.clusters.push_back(comp);
    g.odd.push_back(par != 0);
    g.boundary.push_back(bnd);
  }
  (void)d;
}

inline Growth grow(int d, const std::vector<long>& defect_list) {
  const auto es = edges(d);
  Growth g;
  g.state.assign(es.size(), 0);
  std::set<long> defects(defect_list.begin(), defect_list.end());
  g.active = defects;
  while (true) {
    components(d, es, defects, g);
    std::map<long, int> label;
    bool any = false;
    for (std::size_t i = 0; i < g.clusters.size(); ++i) {
      const bool grows = g.odd[i] && !g.boundary[i];
      any = any || grows;
      for (long v : g.clusters[i]) label[v] = grows ? static_cast<int>(i) : -1;
    }
    if (!any) break;
    ++g.passes;
    for (std::size_t e = 0; e < es.size(); ++e) {
      std::set<int> from;
      auto it = label.find(es[e].first);
      if (it != label.end() && it->second >= 0) from.insert(it->second);
      if (es[e].second >= 0) {
        it = label.find(es[e].second);
        if (it != label.end() && it->second >= 0) from.insert(it->second);
      }
      g.state[e] = static_cast<std::uint8_t>(std::min<int>(2, g.state[e] + static_cast<int>(from.size())));
    }
    for (std::size_t e = 0; e < es.size(); ++e) {
      if (g.state[e] != 2) continue;
      g.active.insert(es[e].first);
      if (es[e].second >= 0) g.active.insert(es[e].second);
    }
  }
  return g;
}

// Memory-table formulas evaluated directly, in bytes.
inline double stm_bytes(int d) { return 7.0 * d * d * d / 8; }
inline double table_bytes(int d) { return 3.0 * d * d * d * std::log2(d) / 8; }
inline double parity_bytes(int d) { return 1.0 * d * d * d / 8; }
inline double zdr_bytes(int d) { return 3.0 * d * d * d / 8; }

}  // namespace oracle
