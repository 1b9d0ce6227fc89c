#include "ufarch/lattice.hpp"

#include <string>

namespace ufarch {

void LatticeParams::validate() const {
  if (d < 3 || d % 2 == 0) {
    throw ParameterError("code distance must be odd and >= 3, got " + std::to_string(d));
  }
  if (rounds != d) {
    throw ParameterError("rounds must equal the code distance");
  }
}

DecodingGraph::DecodingGraph(LatticeParams params) : d_(params.d) {
  params.validate();
  const int d = d_;
  const int cols = d - 1;
  num_internal_ = static_cast<std::size_t>(d) * d * cols;
  const VertexId left_id = left();
  const VertexId right_id = right();

  // Per-vertex slots indexed by Direction; kNoVertex marks an absent edge.
  constexpr EdgeId kNone = 0xffffffffu;
  std::vector<std::array<EdgeId, 6>> slots(num_internal_);
  for (auto& s : slots) s.fill(kNone);
  std::vector<EdgeId> left_edges;
  std::vector<EdgeId> right_edges;

  auto add = [&](VertexId u, VertexId v, EdgeKind kind) {
    edges_.push_back({u, v, kind});
    return static_cast<EdgeId>(edges_.size() - 1);
  };

  for (int layer = 0; layer < d; ++layer) {
    for (int row = 0; row < d; ++row) {
      for (int k = 0; k < d; ++k) {
        // Horizontal edge k sits between columns k-1 and k.
        if (k == 0) {
          VertexId w = vertex_at(layer, row, 0);
          EdgeId e = add(w, left_id, EdgeKind::Space);
          slots[w][static_cast<int>(Direction::West)] = e;
          left_edges.push_back(e);
        } else if (k == cols) {
          VertexId w = vertex_at(layer, row, cols - 1);
          EdgeId e = add(w, right_id, EdgeKind::Space);
          slots[w][static_cast<int>(Direction::East)] = e;
          right_edges.push_back(e);
        } else {
          VertexId a = vertex_at(layer, row, k - 1);
          VertexId b = vertex_at(layer, row, k);
          EdgeId e = add(a, b, EdgeKind::Space);
          slots[a][static_cast<int>(Direction::East)] = e;
          slots[b][static_cast<int>(Direction::West)] = e;
        }
      }
      if (row + 1 < d) {
        for (int c = 0; c < cols; ++c) {
          VertexId a = vertex_at(layer, row, c);
          VertexId b = vertex_at(layer, row + 1, c);
          EdgeId e = add(a, b, EdgeKind::Space);
          slots[a][static_cast<int>(Direction::South)] = e;
          slots[b][static_cast<int>(Direction::North)] = e;
        }
      }
    }
  }
  num_space_ = edges_.size();
  num_boundary_ = left_edges.size() + right_edges.size();

  for (int layer = 0; layer + 1 < d; ++layer) {
    for (int row = 0; row < d; ++row) {
      for (int c = 0; c < cols; ++c) {
        VertexId a = vertex_at(layer, row, c);
        VertexId b = vertex_at(layer + 1, row, c);
        EdgeId e = add(a, b, EdgeKind::Time);
        slots[a][static_cast<int>(Direction::Up)] = e;
        slots[b][static_cast<int>(Direction::Down)] = e;
      }
    }
  }

  adj_offsets_.reserve(num_vertices() + 1);
  adj_offsets_.push_back(0);
  for (VertexId v = 0; v < num_internal_; ++v) {
    for (int dir = 0; dir < 6; ++dir) {
      EdgeId e = slots[v][dir];
      if (e == kNone) continue;
      adjacency_.push_back({e, opposite(e, v), static_cast<Direction>(dir)});
    }
    adj_offsets_.push_back(static_cast<std::uint32_t>(adjacency_.size()));
  }
  for (const auto* list : {&left_edges, &right_edges}) {
    for (EdgeId e : *list) {
      // West for LEFT and East for RIGHT, seen from the virtual side.
      Direction dir = list == &left_edges ? Direction::East : Direction::West;
      adjacency_.push_back({e, edges_[e].u, dir});
    }
    adj_offsets_.push_back(static_cast<std::uint32_t>(adjacency_.size()));
  }
}

const Edge& DecodingGraph::edge(EdgeId e) const {
  if (e >= edges_.size()) throw std::out_of_range("edge id " + std::to_string(e) + " out of range");
  return edges_[e];
}

std::span<const Incidence> DecodingGraph::neighbors(VertexId v) const {
  if (v >= num_vertices()) {
    throw std::out_of_range("vertex id " + std::to_string(v) + " out of range");
  }
  return std::span<const Incidence>(adjacency_).subspan(adj_offsets_[v],
                                                        adj_offsets_[v + 1] - adj_offsets_[v]);
}

VertexCoord DecodingGraph::coord(VertexId v) const {
  if (v >= num_internal_) throw std::out_of_range("virtual vertices have no coordinates");
  const int per_layer = d_ * (d_ - 1);
  const int iv = static_cast<int>(v);
  return {iv / per_layer, (iv % per_layer) / (d_ - 1), iv % (d_ - 1)};
}

DecodingGraph build_decoding_graph(LatticeParams params) { return DecodingGraph(params); }

bool logical_crossing_parity(const DecodingGraph& graph, const BitSet& edges) {
  if (edges.size() != graph.num_edges()) {
    throw ContractViolation("edge set size does not match the graph");
  }
  std::vector<std::uint8_t> parity(graph.num_internal_vertices(), 0);
  bool crossing = false;
  for_each_set_bit(edges, [&](EdgeId e) {
    const Edge& ed = graph.edge(e);
    parity[ed.u] ^= 1;
    if (graph.is_virtual(ed.v)) {
      if (ed.v == graph.left()) crossing = !crossing;
    } else {
      parity[ed.v] ^= 1;
    }
  });
  for (auto bit : parity) {
    if (bit) throw ContractViolation("edge set has a nonzero syndrome");
  }
  return crossing;
}

}  // namespace ufarch
