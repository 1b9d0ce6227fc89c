#include <algorithm>

#include "doctest.h"
#include "oracles.hpp"
#include "ufarch/lattice.hpp"

using namespace ufarch;

TEST_CASE("graph sizes for small and large distances") {
  const DecodingGraph g3(LatticeParams::for_distance(3));
  CHECK(g3.num_internal_vertices() == 18);
  CHECK(g3.num_edges() == 51);
  CHECK(g3.num_space_edges() == 39);
  CHECK(g3.num_time_edges() == 12);
  CHECK(g3.num_boundary_edges() == 18);

  const DecodingGraph g11(LatticeParams::for_distance(11));
  CHECK(g11.num_internal_vertices() == 1210);
  CHECK(g11.num_edges() == 3531);
  CHECK(g11.num_space_edges() == 2431);
  CHECK(g11.num_time_edges() == 1100);
  CHECK(g11.num_boundary_edges() == 242);
}

TEST_CASE("edge enumeration matches the coordinate construction") {
  for (int d : {3, 5, 7}) {
    const DecodingGraph g(LatticeParams::for_distance(d));
    const auto ref = oracle::edges(d);
    REQUIRE(ref.size() == g.num_edges());
    for (EdgeId e = 0; e < g.num_edges(); ++e) {
      const Edge& ed = g.edge(e);
      long v = ed.v == g.left() ? oracle::kLeft : ed.v == g.right() ? oracle::kRight : long(ed.v);
      CHECK(long(ed.u) == ref[e].first);
      CHECK(v == ref[e].second);
      CHECK((ed.kind == EdgeKind::Time) == (e >= g.num_space_edges()));
    }
  }
}

TEST_CASE("adjacency is symmetric and ordered by direction") {
  const DecodingGraph g(LatticeParams::for_distance(5));
  for (VertexId v = 0; v < g.num_internal_vertices(); ++v) {
    const auto nb = g.neighbors(v);
    CHECK(std::is_sorted(nb.begin(), nb.end(),
                         [](const Incidence& a, const Incidence& b) { return a.dir < b.dir; }));
    for (const Incidence& inc : nb) {
      CHECK(g.opposite(inc.edge, v) == inc.vertex);
      const auto back = g.neighbors(inc.vertex);
      CHECK(std::any_of(back.begin(), back.end(),
                        [&](const Incidence& b) { return b.edge == inc.edge && b.vertex == v; }));
    }
  }
  const auto left = g.neighbors(g.left());
  CHECK(left.size() == g.num_boundary_edges() / 2);
  CHECK(std::is_sorted(left.begin(), left.end(),
                       [](const Incidence& a, const Incidence& b) { return a.edge < b.edge; }));
}

TEST_CASE("coordinates round trip") {
  const DecodingGraph g(LatticeParams::for_distance(7));
  for (VertexId v = 0; v < g.num_internal_vertices(); ++v) {
    const VertexCoord c = g.coord(v);
    CHECK(g.vertex_at(c.layer, c.row, c.col) == v);
    CHECK(g.row_index(v) == c.layer * 7 + c.row);
  }
}

TEST_CASE("invalid distances are rejected") {
  CHECK_THROWS_AS(DecodingGraph(LatticeParams::for_distance(4)), ParameterError);
  CHECK_THROWS_AS(DecodingGraph(LatticeParams::for_distance(1)), ParameterError);
  CHECK_THROWS_AS(DecodingGraph(LatticeParams{5, 3}), ParameterError);
  const DecodingGraph g(LatticeParams::for_distance(3));
  CHECK_THROWS_AS(g.edge(51), std::out_of_range);
  CHECK_THROWS_AS(g.neighbors(20), std::out_of_range);
}

TEST_CASE("logical crossing parity") {
  const DecodingGraph g(LatticeParams::for_distance(3));
  // A straight row from LEFT to RIGHT in layer 0 crosses once.
  BitSet row(g.num_edges());
  for (EdgeId e = 0; e < 3; ++e) row.set(e);
  CHECK(logical_crossing_parity(g, row));
  CHECK_FALSE(logical_crossing_parity(g, BitSet(g.num_edges())));
  BitSet single(g.num_edges());
  single.set(1);
  CHECK_THROWS_AS(logical_crossing_parity(g, single), ContractViolation);
  CHECK_THROWS_AS(logical_crossing_parity(g, BitSet(3)), ContractViolation);
}
