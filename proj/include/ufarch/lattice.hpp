#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <vector>

#include "ufarch/common.hpp"

namespace ufarch {

struct LatticeParams {
  int d = 3;       ///< code distance, odd and >= 3
  int rounds = 3;  ///< measurement rounds per logical cycle, always d

  static LatticeParams for_distance(int d) { return {d, d}; }
  void validate() const;
};

enum class EdgeKind : std::uint8_t { Space, Time };

/// Neighbor directions, in the fixed order used for every traversal.
enum class Direction : std::uint8_t { West, East, North, South, Down, Up };

struct Edge {
  VertexId u = 0;  ///< lower endpoint id; always an internal vertex
  VertexId v = 0;  ///< may be a virtual boundary vertex
  EdgeKind kind = EdgeKind::Space;
};

struct Incidence {
  EdgeId edge = 0;
  VertexId vertex = 0;  ///< far endpoint
  Direction dir = Direction::West;
};

struct VertexCoord {
  int layer = 0;
  int row = 0;
  int col = 0;
};

/// Three-dimensional decoding graph of a distance-d surface code over d
/// rounds. Each layer is a d x (d-1) grid of syndrome vertices; the left and
/// right sides of every layer connect to two shared virtual vertices.
///
/// Vertex ids are layer-major then row-major: layer*d*(d-1) + row*(d-1) + col.
/// The two virtual vertices follow the internal ones (LEFT, then RIGHT).
/// Edge ids list the space edges of layer 0, layer 1, ... and then all time
/// edges; within a layer each row contributes its d horizontal edges
/// (west to east) followed by the d-1 vertical edges to the next row.
class DecodingGraph {
 public:
  explicit DecodingGraph(LatticeParams params);

  int distance() const { return d_; }
  int layers() const { return d_; }
  int rows() const { return d_; }
  int cols() const { return d_ - 1; }

  std::size_t num_internal_vertices() const { return num_internal_; }
  std::size_t num_vertices() const { return num_internal_ + 2; }
  std::size_t num_edges() const { return edges_.size(); }
  std::size_t num_space_edges() const { return num_space_; }
  std::size_t num_time_edges() const { return edges_.size() - num_space_; }
  std::size_t num_boundary_edges() const { return num_boundary_; }

  VertexId left() const { return static_cast<VertexId>(num_internal_); }
  VertexId right() const { return static_cast<VertexId>(num_internal_ + 1); }
  bool is_virtual(VertexId v) const { return v >= num_internal_; }
  bool is_boundary_edge(EdgeId e) const { return is_virtual(edges_[e].v); }

  const Edge& edge(EdgeId e) const;
  std::span<const Edge> edges() const { return edges_; }

  /// Incident edges in (W, E, N, S, Down, Up) order. Virtual vertices list
  /// their edges in ascending edge id.
  std::span<const Incidence> neighbors(VertexId v) const;

  VertexId opposite(EdgeId e, VertexId v) const {
    const Edge& ed = edges_[e];
    return ed.u == v ? ed.v : ed.u;
  }

  VertexCoord coord(VertexId v) const;
  VertexId vertex_at(int layer, int row, int col) const {
    return static_cast<VertexId>((layer * d_ + row) * (d_ - 1) + col);
  }

  /// Memory row (layer, row) holding vertex v; d*d rows in total.
  int row_index(VertexId v) const { return static_cast<int>(v) / (d_ - 1); }
  int num_rows() const { return d_ * d_; }

 private:
  int d_;
  std::size_t num_internal_;
  std::size_t num_space_ = 0;
  std::size_t num_boundary_ = 0;
  std::vector<Edge> edges_;
  std::vector<std::uint32_t> adj_offsets_;
  std::vector<Incidence> adjacency_;
};

DecodingGraph build_decoding_graph(LatticeParams params);

/// Parity of the edges in `edges` that touch the LEFT boundary. The set must
/// have an empty syndrome; a result of 1 means it is a logical operator.
bool logical_crossing_parity(const DecodingGraph& graph, const BitSet& edges);

}  // namespace ufarch
