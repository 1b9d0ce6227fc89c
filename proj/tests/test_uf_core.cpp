#include <algorithm>
#include <map>

#include "doctest.h"
#include "oracles.hpp"
#include "ufarch/uf_core.hpp"

using namespace ufarch;

namespace {

Syndrome syndrome_from(const DecodingGraph& g, std::initializer_list<EdgeId> faults) {
  ErrorPattern err(g.num_edges());
  for (EdgeId e : faults) err.set(e);
  return syndrome_of(g, err);
}

}  // namespace

TEST_CASE("weighted union prefers the larger cluster, then the smaller id") {
  ClusterSet cs(8, 0);
  for (VertexId v = 0; v < 8; ++v) cs.activate(v, v % 2 == 0);
  CHECK(cs.unite(3, 1) == 1);
  CHECK(cs.size(1) == 2);
  CHECK(cs.unite(0, 1) == 1);  // larger cluster survives
  CHECK(cs.size(1) == 3);
  CHECK(cs.odd(1));            // defects 0 only: 1, 3 are not defects
  CHECK(cs.unite(5, 4) == 4);
  CHECK(cs.odd(4));
  CHECK(cs.unite(3, 4) == 1);
  CHECK_FALSE(cs.odd(1));
  CHECK(cs.unite(0, 5) == 1);  // already joined
}

TEST_CASE("find compresses at most five path vertices") {
  const std::size_t n = 256;
  ClusterSet cs(n, 0);
  for (VertexId v = 0; v < n; ++v) cs.activate(v, false);
  // Unions of equal-size trees build a binomial tree of depth 8.
  for (std::size_t w = 1; w < n; w *= 2) {
    for (std::size_t a = 0; a < n; a += 2 * w) cs.unite(VertexId(a + w), VertexId(a));
  }
  // Deepest vertex: follow parents from the highest id.
  std::vector<VertexId> path;
  for (VertexId x = n - 1; cs.parent(x) != x; x = cs.parent(x)) path.push_back(x);
  REQUIRE(path.size() == 8);
  const VertexId root = cs.find(n - 1);
  CHECK(root == 0);
  for (std::size_t i = 0; i < path.size(); ++i) {
    if (i >= path.size() - kFindCompressionSlots) {
      CHECK(cs.parent(path[i]) == root);
    } else {
      CHECK(cs.parent(path[i]) != root);
    }
  }
  CHECK(cs.find(n - 1) == root);
}

TEST_CASE("single defect grows to the boundary") {
  const DecodingGraph g(LatticeParams::for_distance(7));
  Syndrome syn(g.num_internal_vertices());
  const VertexId v = g.vertex_at(3, 3, 2);
  syn.set(v);
  std::uint32_t passes = 0;
  ClusterSet cs = grow_clusters(g, syn, &passes);
  CHECK(passes == 6);
  const VertexId r = cs.find(v);
  CHECK(cs.touches_boundary(r));
  CHECK(cs.odd(r));
  const auto stats = collect_stats(cs, passes);
  REQUIRE(stats.num_clusters() == 1);
  CHECK(stats.clusters[0].growth_steps == 6);
  CHECK(cluster_diameters(g, cs, stats.clusters)[0] == 6);
}

TEST_CASE("adjacent defect pair fuses after one pass") {
  const DecodingGraph g(LatticeParams::for_distance(5));
  const EdgeId e = 1;  // internal horizontal edge in layer 0
  REQUIRE_FALSE(g.is_boundary_edge(e));
  std::uint32_t passes = 0;
  ClusterSet cs = grow_clusters(g, syndrome_from(g, {e}), &passes);
  CHECK(passes == 1);
  CHECK(cs.edge_state(e) == 2);
  const VertexId r = cs.find(g.edge(e).u);
  CHECK(r == cs.find(g.edge(e).v));
  CHECK_FALSE(cs.odd(r));
  CHECK(cs.size(r) == 2);
}

TEST_CASE("growth agrees with the flood-fill oracle") {
  for (int d : {3, 5}) {
    const DecodingGraph g(LatticeParams::for_distance(d));
    UnionFindDecoder dec(g);
    for (std::uint64_t t = 0; t < 150; ++t) {
      const ErrorPattern err = sample_error(g, {0.04, 77, t});
      const Syndrome syn = syndrome_of(g, err);
      std::vector<long> defects;
      for_each_set_bit(syn, [&](std::size_t v) { defects.push_back(long(v)); });
      const oracle::Growth ref = oracle::grow(d, defects);
      ClusterSet& cs = dec.grow(syn);
      CHECK(dec.last_passes() == std::uint32_t(ref.passes));
      for (EdgeId e = 0; e < g.num_edges(); ++e) REQUIRE(cs.edge_state(e) == ref.state[e]);
      REQUIRE(cs.active_vertices().size() == ref.active.size());
      for (std::size_t i = 0; i < ref.clusters.size(); ++i) {
        const VertexId r = cs.find(VertexId(ref.clusters[i].front()));
        CHECK(cs.size(r) == ref.clusters[i].size());
        CHECK(cs.odd(r) == ref.odd[i]);
        CHECK(cs.touches_boundary(r) == ref.boundary[i]);
        for (long v : ref.clusters[i]) CHECK(cs.find(VertexId(v)) == r);
      }
    }
  }
}

TEST_CASE("every cluster is even or touches the boundary after growth") {
  for (int d : {3, 5, 7, 9}) {
    const DecodingGraph g(LatticeParams::for_distance(d));
    UnionFindDecoder dec(g);
    for (std::uint64_t t = 0; t < 300; ++t) {
      const ErrorPattern err = sample_error(g, {0.02 + 0.01 * (t % 5), 5, t});
      ClusterSet& cs = dec.grow(syndrome_of(g, err));
      for (VertexId r : cs.roots()) CHECK((!cs.odd(r) || cs.touches_boundary(r)));
    }
  }
}

TEST_CASE("spanning forest covers each cluster with grown edges") {
  const DecodingGraph g(LatticeParams::for_distance(7));
  UnionFindDecoder dec(g);
  for (std::uint64_t t = 0; t < 200; ++t) {
    const ErrorPattern err = sample_error(g, {0.03, 8, t});
    ClusterSet& cs = dec.grow(syndrome_of(g, err));
    const SpanningForest f = spanning_forest(g, cs);
    CHECK(f.trees.size() == cs.roots().size());
    for (const SpanningTree& tree : f.trees) {
      CHECK(tree.edges.size() == tree.num_vertices - (tree.boundary_rooted ? 0 : 1));
      CHECK(tree.boundary_rooted == g.is_virtual(tree.root));
      for (const TreeEdge& te : tree.edges) CHECK(cs.edge_state(te.edge) == 2);
    }
  }
}

TEST_CASE("correction cancels the syndrome on every decode") {
  for (int d : {3, 5, 7, 9, 11}) {
    const DecodingGraph g(LatticeParams::for_distance(d));
    UnionFindDecoder dec(g);
    for (std::uint64_t t = 0; t < 300; ++t) {
      const ErrorPattern err = sample_error(g, {0.005 * (1 + t % 6), 31, t});
      const DecodeResult r = dec.decode(syndrome_of(g, err));
      CHECK(syndrome_of(g, r.correction) == syndrome_of(g, err));
      CHECK_NOTHROW(assess(g, err, r.correction));
    }
  }
}

TEST_CASE("all single faults at distance 3 are corrected") {
  const DecodingGraph g(LatticeParams::for_distance(3));
  for (EdgeId e = 0; e < g.num_edges(); ++e) {
    ErrorPattern err(g.num_edges());
    err.set(e);
    const DecodeResult r = decode(g, syndrome_of(g, err));
    CHECK(assess(g, err, r.correction).success);
  }
}

TEST_CASE("all faults of weight two at distance 5 are corrected") {
  const DecodingGraph g(LatticeParams::for_distance(5));
  UnionFindDecoder dec(g);
  std::size_t failures = 0;
  for (EdgeId a = 0; a < g.num_edges(); ++a) {
    for (EdgeId b = a; b < g.num_edges(); ++b) {
      ErrorPattern err(g.num_edges());
      err.set(a);
      err.set(b);
      const DecodeResult r = dec.decode(syndrome_of(g, err));
      if (!assess(g, err, r.correction).success) ++failures;
    }
  }
  CHECK(failures == 0);
}

TEST_CASE("decoder edge cases") {
  const DecodingGraph g(LatticeParams::for_distance(3));
  const DecodeResult r = decode(g, Syndrome(g.num_internal_vertices()));
  CHECK(r.correction.none());
  CHECK(r.stats.passes == 0);
  CHECK(r.stats.num_clusters() == 0);
  CHECK_THROWS_AS(decode(g, Syndrome(5)), ContractViolation);
  CHECK_THROWS_AS(assess(g, BitSet(3), BitSet(3)), ContractViolation);
  ErrorPattern err(g.num_edges());
  err.set(1);
  CHECK_THROWS_AS(assess(g, err, BitSet(g.num_edges())), InvariantViolation);
}

TEST_CASE("decoder instance reuse gives identical results") {
  const DecodingGraph g(LatticeParams::for_distance(7));
  UnionFindDecoder dec(g);
  for (std::uint64_t t = 0; t < 100; ++t) {
    const Syndrome syn = syndrome_of(g, sample_error(g, {0.02, 4, t}));
    CHECK(dec.decode(syn).correction == decode(g, syn).correction);
  }
}
