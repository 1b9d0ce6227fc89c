#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "ufarch/lattice.hpp"
#include "ufarch/noise.hpp"

namespace ufarch {

/// Number of vertices a find() can re-point at once (tree traversal registers).
inline constexpr int kFindCompressionSlots = 5;

/// Union-find partition of the internal vertices plus the half-edge growth
/// state of every edge. Vertices not yet reached by any cluster are inactive
/// singletons.
class ClusterSet {
 public:
  ClusterSet() = default;
  ClusterSet(std::size_t num_vertices, std::size_t num_edges);

  std::size_t num_vertices() const { return parent_.size(); }
  std::size_t num_edges() const { return edge_state_.size(); }

  /// Root of v. Re-points the last kFindCompressionSlots non-root vertices on
  /// the path directly at the root.
  VertexId find(VertexId v);

  /// Weighted union; the larger cluster's root survives, ties go to the
  /// smaller root id. Returns the surviving root.
  VertexId unite(VertexId u, VertexId v);

  /// Marks v as part of a cluster. Defects start odd with size 1.
  void activate(VertexId v, bool defect);

  VertexId parent(VertexId v) const { return parent_[v]; }
  bool active(VertexId v) const { return active_[v] != 0; }
  std::uint32_t size(VertexId root) const { return size_[root]; }
  bool odd(VertexId root) const { return parity_[root] != 0; }
  bool touches_boundary(VertexId root) const { return boundary_[root] != 0; }
  std::uint32_t growth_steps(VertexId root) const { return growth_[root]; }
  std::uint8_t edge_state(EdgeId e) const { return edge_state_[e]; }

  void set_touches_boundary(VertexId root) { boundary_[root] = 1; }
  void add_growth_step(VertexId root) { ++growth_[root]; }
  /// Raises edge e by one half-edge; returns the new state.
  std::uint8_t grow_edge(EdgeId e) {
    if (edge_state_[e] == 0) touched_edges_.push_back(e);
    return ++edge_state_[e];
  }

  /// Active vertices in the order they were activated.
  const std::vector<VertexId>& active_vertices() const { return active_list_; }

  /// Sorted list of roots of active clusters.
  std::vector<VertexId> roots();

  /// Clears all state touched since construction or the last reset.
  void reset();

 private:
  std::vector<VertexId> parent_;
  std::vector<std::uint32_t> size_;
  std::vector<std::uint32_t> growth_;
  std::vector<std::uint8_t> parity_;
  std::vector<std::uint8_t> boundary_;
  std::vector<std::uint8_t> active_;
  std::vector<std::uint8_t> edge_state_;
  std::vector<VertexId> active_list_;
  std::vector<EdgeId> touched_edges_;

};

struct TreeEdge {
  EdgeId edge = 0;
  VertexId leaf = 0;    ///< endpoint farther from the tree root
  VertexId parent = 0;  ///< endpoint closer to the root; may be virtual
};

struct SpanningTree {
  VertexId root = 0;          ///< DFS start; a virtual vertex for boundary clusters
  bool boundary_rooted = false;
  std::uint32_t num_vertices = 0;  ///< internal vertices in the cluster
  std::vector<TreeEdge> edges;     ///< DFS visit order
};

struct SpanningForest {
  std::vector<SpanningTree> trees;  ///< ordered by smallest cluster vertex id
};

using Correction = BitSet;

struct ClusterStats {
  VertexId root = 0;
  std::uint32_t num_vertices = 0;
  std::uint32_t growth_steps = 0;
  bool touches_boundary = false;
};

struct DecodeStats {
  std::uint32_t passes = 0;
  std::vector<ClusterStats> clusters;  ///< ordered by root id

  std::size_t num_clusters() const { return clusters.size(); }
};

struct DecodeResult {
  Correction correction;
  DecodeStats stats;
};

struct DecodeOutcome {
  bool success = true;
  bool residual_logical = false;
  DecodeStats stats;
};

/// Grows every odd, boundary-free cluster by one half-edge per pass until all
/// clusters are even or touch the boundary. `passes` receives the pass count.
ClusterSet grow_clusters(const DecodingGraph& graph, const Syndrome& syn,
                         std::uint32_t* passes = nullptr);

/// Depth-first spanning tree of each cluster over fully grown edges.
SpanningForest spanning_forest(const DecodingGraph& graph, ClusterSet& cs);

/// Peels the forest leaves-to-root against the syndrome.
Correction peel(const DecodingGraph& graph, const SpanningForest& forest, const Syndrome& syn);

DecodeStats collect_stats(ClusterSet& cs, std::uint32_t passes);

DecodeResult decode(const DecodingGraph& graph, const Syndrome& syn);

/// Checks the correction against the actual error; throws InvariantViolation
/// if the residual still has a syndrome.
DecodeOutcome assess(const DecodingGraph& graph, const ErrorPattern& err, const Correction& corr);

/// Per-cluster geometric diameter of the grown region, in edge units: the
/// longest shortest path through the cluster's vertices and grown half-edges,
/// halved and rounded up. A lone defect after g passes has diameter g.
std::vector<std::uint32_t> cluster_diameters(const DecodingGraph& graph, ClusterSet& cs,
                                             const std::vector<ClusterStats>& clusters);

/// Reusable decoder; keeps its work buffers between calls.
class UnionFindDecoder {
 public:
  explicit UnionFindDecoder(const DecodingGraph& graph);

  /// Grows clusters for `syn`; the result stays valid until the next call.
  ClusterSet& grow(const Syndrome& syn);
  DecodeResult decode(const Syndrome& syn);

  std::uint32_t last_passes() const { return passes_; }
  const DecodingGraph& graph() const { return *graph_; }

 private:
  const DecodingGraph* graph_;
  ClusterSet clusters_;
  std::vector<std::uint32_t> stamp_pass_;
  std::vector<VertexId> stamp_root_;
  std::vector<std::uint32_t> root_stamp_;
  std::vector<std::pair<VertexId, VertexId>> growing_;
  std::vector<EdgeId> fusion_;
  std::uint32_t pass_counter_ = 0;
  std::uint32_t passes_ = 0;
};

}  // namespace ufarch
