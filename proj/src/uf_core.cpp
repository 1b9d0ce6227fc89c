#include "ufarch/uf_core.hpp"

#include <algorithm>
#include <array>
#include <deque>
#include <string>
#include <unordered_map>

namespace ufarch {

ClusterSet::ClusterSet(std::size_t num_vertices, std::size_t num_edges)
    : parent_(num_vertices),
      size_(num_vertices, 1),
      growth_(num_vertices, 0),
      parity_(num_vertices, 0),
      boundary_(num_vertices, 0),
      active_(num_vertices, 0),
      edge_state_(num_edges, 0) {
  for (std::size_t v = 0; v < num_vertices; ++v) parent_[v] = static_cast<VertexId>(v);
}

VertexId ClusterSet::find(VertexId v) {
  std::array<VertexId, kFindCompressionSlots> regs{};
  int count = 0;
  VertexId x = v;
  while (parent_[x] != x) {
    regs[count % kFindCompressionSlots] = x;
    ++count;
    x = parent_[x];
  }
  const int kept = std::min(count, kFindCompressionSlots);
  for (int i = 0; i < kept; ++i) parent_[regs[i]] = x;
  return x;
}

VertexId ClusterSet::unite(VertexId u, VertexId v) {
  VertexId a = find(u);
  VertexId b = find(v);
  if (a == b) return a;
  if (size_[a] < size_[b] || (size_[a] == size_[b] && b < a)) std::swap(a, b);
  parent_[b] = a;
  size_[a] += size_[b];
  parity_[a] ^= parity_[b];
  boundary_[a] |= boundary_[b];
  growth_[a] = std::max(growth_[a], growth_[b]);
  return a;
}

void ClusterSet::activate(VertexId v, bool defect) {
  if (active_[v]) return;
  active_[v] = 1;
  parity_[v] = defect ? 1 : 0;
  active_list_.push_back(v);
}

std::vector<VertexId> ClusterSet::roots() {
  std::vector<VertexId> out;
  out.reserve(active_list_.size());
  for (VertexId v : active_list_) {
    if (find(v) == v) out.push_back(v);
  }
  std::sort(out.begin(), out.end());
  return out;
}

void ClusterSet::reset() {
  for (VertexId v : active_list_) {
    parent_[v] = v;
    size_[v] = 1;
    growth_[v] = 0;
    parity_[v] = 0;
    boundary_[v] = 0;
    active_[v] = 0;
  }
  active_list_.clear();
  for (EdgeId e : touched_edges_) edge_state_[e] = 0;
  touched_edges_.clear();
}

UnionFindDecoder::UnionFindDecoder(const DecodingGraph& graph)
    : graph_(&graph),
      clusters_(graph.num_internal_vertices(), graph.num_edges()),
      stamp_pass_(graph.num_edges(), 0),
      stamp_root_(graph.num_edges(), kNoVertex),
      root_stamp_(graph.num_internal_vertices(), 0) {}

ClusterSet& UnionFindDecoder::grow(const Syndrome& syn) {
  const DecodingGraph& g = *graph_;
  if (syn.size() != g.num_internal_vertices()) {
    throw ContractViolation("syndrome length does not match the graph");
  }
  ClusterSet& cs = clusters_;
  cs.reset();
  passes_ = 0;
  for_each_set_bit(syn, [&](VertexId v) { cs.activate(v, true); });

  std::vector<VertexId> scan;
  while (true) {
    scan = cs.active_vertices();
    std::sort(scan.begin(), scan.end());
    growing_.clear();
    for (VertexId v : scan) {
      VertexId r = cs.find(v);
      if (cs.odd(r) && !cs.touches_boundary(r)) growing_.emplace_back(v, r);
    }
    if (growing_.empty()) break;

    ++passes_;
    const std::uint32_t stamp = ++pass_counter_;
    for (auto [v, r] : growing_) {
      if (root_stamp_[r] != stamp) {
        root_stamp_[r] = stamp;
        cs.add_growth_step(r);
      }
    }

    fusion_.clear();
    for (auto [v, r] : growing_) {
      for (const Incidence& inc : g.neighbors(v)) {
        const EdgeId e = inc.edge;
        if (cs.edge_state(e) >= 2) continue;
        if (stamp_pass_[e] == stamp && stamp_root_[e] == r) continue;
        stamp_pass_[e] = stamp;
        stamp_root_[e] = r;
        if (cs.grow_edge(e) == 2) fusion_.push_back(e);
      }
    }

    for (EdgeId e : fusion_) {
      const Edge& ed = g.edge(e);
      if (g.is_virtual(ed.v)) {
        cs.set_touches_boundary(cs.find(ed.u));
        continue;
      }
      cs.activate(ed.u, false);
      cs.activate(ed.v, false);
      cs.unite(ed.u, ed.v);
    }
  }
  return cs;
}

ClusterSet grow_clusters(const DecodingGraph& graph, const Syndrome& syn, std::uint32_t* passes) {
  UnionFindDecoder dec(graph);
  ClusterSet cs = dec.grow(syn);
  if (passes) *passes = dec.last_passes();
  return cs;
}

namespace {

struct ClusterMembers {
  VertexId root = 0;
  std::vector<VertexId> vertices;  // ascending
};

std::vector<ClusterMembers> group_members(ClusterSet& cs) {
  std::vector<VertexId> active = cs.active_vertices();
  std::sort(active.begin(), active.end());
  std::vector<ClusterMembers> groups;
  std::unordered_map<VertexId, std::size_t> index;
  for (VertexId v : active) {
    VertexId r = cs.find(v);
    auto [it, inserted] = index.emplace(r, groups.size());
    if (inserted) groups.push_back({r, {}});
    groups[it->second].vertices.push_back(v);
  }
  return groups;
}

}  // namespace

SpanningForest spanning_forest(const DecodingGraph& graph, ClusterSet& cs) {
  SpanningForest forest;
  std::vector<std::uint8_t> visited(graph.num_internal_vertices(), 0);
  std::vector<std::pair<VertexId, std::uint32_t>> stack;

  for (const ClusterMembers& group : group_members(cs)) {
    const VertexId r = group.root;
    if (cs.odd(r) && !cs.touches_boundary(r)) {
      throw ContractViolation("cluster rooted at " + std::to_string(r) +
                              " is odd and does not touch the boundary");
    }
    SpanningTree tree;
    tree.num_vertices = static_cast<std::uint32_t>(group.vertices.size());
    VertexId start = group.vertices.front();
    tree.root = start;
    if (cs.touches_boundary(r)) {
      bool found = false;
      for (VertexId v : group.vertices) {
        for (const Incidence& inc : graph.neighbors(v)) {
          if (graph.is_virtual(inc.vertex) && cs.edge_state(inc.edge) == 2) {
            tree.root = inc.vertex;
            tree.boundary_rooted = true;
            tree.edges.push_back({inc.edge, v, inc.vertex});
            start = v;
            found = true;
            break;
          }
        }
        if (found) break;
      }
      if (!found) throw InvariantViolation("boundary cluster without a grown boundary edge");
    }

    visited[start] = 1;
    stack.clear();
    stack.emplace_back(start, 0);
    while (!stack.empty()) {
      const VertexId x = stack.back().first;
      const auto nbrs = graph.neighbors(x);
      std::uint32_t& next = stack.back().second;
      if (next == nbrs.size()) {
        stack.pop_back();
        continue;
      }
      const Incidence& inc = nbrs[next++];
      if (graph.is_virtual(inc.vertex) || cs.edge_state(inc.edge) != 2) continue;
      if (visited[inc.vertex]) continue;
      visited[inc.vertex] = 1;
      tree.edges.push_back({inc.edge, inc.vertex, x});
      stack.emplace_back(inc.vertex, 0);
    }

    const std::size_t expected = group.vertices.size() - (tree.boundary_rooted ? 0 : 1);
    if (tree.edges.size() != expected) {
      throw InvariantViolation("spanning tree does not cover its cluster");
    }
    forest.trees.push_back(std::move(tree));
  }
  return forest;
}

Correction peel(const DecodingGraph& graph, const SpanningForest& forest, const Syndrome& syn) {
  if (syn.size() != graph.num_internal_vertices()) {
    throw ContractViolation("syndrome length does not match the graph");
  }
  Correction corr(graph.num_edges());
  Syndrome defects = syn;
  for (const SpanningTree& tree : forest.trees) {
    for (auto it = tree.edges.rbegin(); it != tree.edges.rend(); ++it) {
      if (!defects.test(it->leaf)) continue;
      corr.flip(it->edge);
      defects.reset(it->leaf);
      if (!graph.is_virtual(it->parent)) defects.flip(it->parent);
    }
    if (!tree.boundary_rooted && defects.test(tree.root)) {
      throw InvariantViolation("defect left at the root of an even cluster");
    }
  }
  if (defects.any()) throw InvariantViolation("peeling left defects outside every cluster");
  return corr;
}

DecodeStats collect_stats(ClusterSet& cs, std::uint32_t passes) {
  DecodeStats stats;
  stats.passes = passes;
  for (VertexId r : cs.roots()) {
    stats.clusters.push_back({r, cs.size(r), cs.growth_steps(r), cs.touches_boundary(r)});
  }
  return stats;
}

DecodeResult UnionFindDecoder::decode(const Syndrome& syn) {
  ClusterSet& cs = grow(syn);
  SpanningForest forest = spanning_forest(*graph_, cs);
  DecodeResult result;
  result.correction = peel(*graph_, forest, syn);
  result.stats = collect_stats(cs, passes_);
  return result;
}

DecodeResult decode(const DecodingGraph& graph, const Syndrome& syn) {
  UnionFindDecoder dec(graph);
  return dec.decode(syn);
}

DecodeOutcome assess(const DecodingGraph& graph, const ErrorPattern& err, const Correction& corr) {
  if (err.size() != graph.num_edges() || corr.size() != graph.num_edges()) {
    throw ContractViolation("edge set size does not match the graph");
  }
  BitSet residual = err ^ corr;
  if (syndrome_of(graph, residual).any()) {
    throw InvariantViolation("correction does not cancel the syndrome");
  }
  DecodeOutcome out;
  out.residual_logical = logical_crossing_parity(graph, residual);
  out.success = !out.residual_logical;
  return out;
}

std::vector<std::uint32_t> cluster_diameters(const DecodingGraph& graph, ClusterSet& cs,
                                             const std::vector<ClusterStats>& clusters) {
  std::unordered_map<VertexId, std::vector<VertexId>> by_root;
  for (VertexId v : cs.active_vertices()) by_root[cs.find(v)].push_back(v);

  std::vector<std::uint32_t> out;
  out.reserve(clusters.size());
  for (const ClusterStats& c : clusters) {
    const auto& members = by_root.at(c.root);
    // Nodes: cluster vertices, then edge midpoints, then half-edge tips.
    std::unordered_map<VertexId, std::uint32_t> vnode;
    std::unordered_map<EdgeId, std::uint32_t> mnode;
    std::vector<std::vector<std::uint32_t>> adj;
    auto new_node = [&] {
      adj.emplace_back();
      return static_cast<std::uint32_t>(adj.size() - 1);
    };
    auto link = [&](std::uint32_t a, std::uint32_t b) {
      adj[a].push_back(b);
      adj[b].push_back(a);
    };
    for (VertexId v : members) vnode.emplace(v, new_node());
    for (VertexId v : members) {
      for (const Incidence& inc : graph.neighbors(v)) {
        const std::uint8_t s = cs.edge_state(inc.edge);
        if (s == 0) continue;
        const bool far_member = !graph.is_virtual(inc.vertex) && cs.active(inc.vertex) &&
                                cs.find(inc.vertex) == c.root;
        if (s == 1 && far_member) continue;
        auto [it, fresh] = mnode.emplace(inc.edge, 0);
        if (fresh) {
          it->second = new_node();
          if (s == 2 && !far_member) link(it->second, new_node());
        }
        link(vnode.at(v), it->second);
      }
    }
    std::uint32_t longest = 0;
    std::vector<std::int32_t> dist(adj.size());
    std::deque<std::uint32_t> queue;
    for (std::uint32_t src = 0; src < adj.size(); ++src) {
      std::fill(dist.begin(), dist.end(), -1);
      dist[src] = 0;
      queue.assign(1, src);
      while (!queue.empty()) {
        auto x = queue.front();
        queue.pop_front();
        longest = std::max<std::uint32_t>(longest, static_cast<std::uint32_t>(dist[x]));
        for (auto y : adj[x]) {
          if (dist[y] < 0) {
            dist[y] = dist[x] + 1;
            queue.push_back(y);
          }
        }
      }
    }
    out.push_back((longest + 1) / 2);
  }
  return out;
}

}  // namespace ufarch
