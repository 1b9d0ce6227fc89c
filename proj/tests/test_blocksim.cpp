#include <cmath>
#include <random>

#include "doctest.h"
#include "ufarch/blocksim.hpp"

using namespace ufarch;

namespace {

std::vector<StreamWorkload> random_workloads(std::mt19937_64& rng, int streams) {
  std::vector<StreamWorkload> out(streams);
  std::uniform_int_distribution<int> nclusters(0, 6), size(1, 12), gg(0, 120);
  for (auto& w : out) {
    const int k = nclusters(rng);
    for (int i = 0; i < k; ++i) {
      const auto s = static_cast<std::uint32_t>(size(rng));
      w.cluster_sizes.push_back(s);
      w.tree_edges.push_back(s - 1);
    }
    w.grgen_reads = k ? static_cast<std::uint64_t>(gg(rng) + k) : 0;
  }
  return out;
}

BlockConfig config(BlockShape shape) {
  BlockConfig cfg;
  cfg.shape = shape;
  return cfg;
}

}  // namespace

TEST_CASE("block shape parsing") {
  const BlockShape s = BlockShape::parse("4,2,1,1");
  CHECK(s.streams == 4);
  CHECK(s.grgen == 2);
  CHECK(s.dfs == 1);
  CHECK(s.corr == 1);
  CHECK(s.to_string() == "4,2,1,1");
  CHECK_THROWS_AS(BlockShape::parse("4,2,1"), ParameterError);
  CHECK_THROWS_AS(BlockShape::parse("4,2,3,1"), ParameterError);
  CHECK_THROWS_AS(BlockShape::parse("4,x,1,1"), ParameterError);
  CHECK_THROWS_AS(BlockShape::parse("4,2,1,1,1"), ParameterError);
  CHECK_THROWS_AS(BlockShape::parse("0,2,1,1"), ParameterError);
}

TEST_CASE("empty workloads complete at time zero") {
  const std::vector<StreamWorkload> w(4);
  const BlockResult r = simulate_block(config({}), w);
  REQUIRE(r.completion.size() == 4);
  for (double c : r.completion) CHECK(c == 0);
  CHECK(r.makespan == 0);
  CHECK(r.timeout_failures == 0);
}

TEST_CASE("single stream without contention") {
  StreamWorkload w;
  w.grgen_reads = 10;
  w.cluster_sizes = {4};
  w.tree_edges = {3};
  const BlockResult r = simulate_block(config({1, 1, 1, 1}), std::vector{w});
  CHECK(r.completion[0] == doctest::Approx(18e-9));
}

TEST_CASE("dual stacks overlap correction with the next traversal") {
  StreamWorkload w;
  w.grgen_reads = 5;
  w.cluster_sizes = {4, 4, 4};
  w.tree_edges = {3, 3, 3};
  const BlockResult r = simulate_block(config({1, 1, 1, 1}), std::vector{w});
  // DFS runs back to back; the last correction follows the last traversal.
  CHECK(r.completion[0] == doctest::Approx((5 + 12 + 4) * 1e-9));
}

TEST_CASE("completion times never grow with more engines") {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 3000; ++trial) {
    const int streams = 2 + trial % 7;
    const auto w = random_workloads(rng, streams);
    for (int corr = 1; corr <= 4; ++corr) {
      std::vector<double> prev;
      for (int dfs = 1; dfs <= 4; ++dfs) {
        const BlockResult r = simulate_block(config({streams, 4, dfs, corr}), w);
        if (!prev.empty()) {
          for (int s = 0; s < streams; ++s) CHECK(r.completion[s] <= prev[s] + 1e-15);
        }
        prev = r.completion;
      }
    }
    for (int dfs = 1; dfs <= 4; ++dfs) {
      std::vector<double> prev;
      for (int corr = 1; corr <= 4; ++corr) {
        const BlockResult r = simulate_block(config({streams, 4, dfs, corr}), w);
        if (!prev.empty()) {
          for (int s = 0; s < streams; ++s) CHECK(r.completion[s] <= prev[s] + 1e-15);
        }
        prev = r.completion;
      }
    }
  }
}

TEST_CASE("busy time is conserved") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 500; ++trial) {
    const auto w = random_workloads(rng, 4);
    for (bool shared : {false, true}) {
      BlockConfig cfg = config({4, 2, 1, 1});
      cfg.shared_tables = shared;
      const BlockResult r = simulate_block(cfg, w);
      double gg = 0, work = 0;
      for (const auto& s : w) {
        gg += s.grgen_reads * 1e-9;
        for (auto c : s.cluster_sizes) work += c * 1e-9;
      }
      double gb = 0, db = 0, cb = 0;
      for (double b : r.grgen_busy) gb += b;
      for (double b : r.dfs_busy) db += b;
      for (double b : r.corr_busy) cb += b;
      CHECK(gb == doctest::Approx(gg));
      CHECK(db == doctest::Approx(work));
      CHECK(cb == doctest::Approx(work));
      for (double u : r.utilization(r.dfs_busy)) CHECK(u <= 1.0 + 1e-12);
    }
  }
}

TEST_CASE("ample engines reach the pipelined lower bound") {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 500; ++trial) {
    const auto w = random_workloads(rng, 4);
    const BlockResult r = simulate_block(config({4, 64, 64, 64}), w);
    for (int s = 0; s < 4; ++s) {
      double bound = w[s].grgen_reads;
      for (auto c : w[s].cluster_sizes) bound += c;
      if (!w[s].cluster_sizes.empty()) bound += w[s].cluster_sizes.back();
      CHECK(r.completion[s] == doctest::Approx(bound * 1e-9));
    }
  }
}

TEST_CASE("shared tables never speed up a block") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 500; ++trial) {
    const auto w = random_workloads(rng, 4);
    BlockConfig cfg = config({4, 2, 1, 1});
    const double own = simulate_block(cfg, w).makespan;
    cfg.shared_tables = true;
    CHECK(simulate_block(cfg, w).makespan >= own - 1e-15);
  }
}

TEST_CASE("timeout and overflow failures") {
  StreamWorkload w;
  w.grgen_reads = 100;
  w.cluster_sizes = {50, 3};
  w.tree_edges = {49, 2};
  BlockConfig cfg = config({1, 1, 1, 1});
  cfg.timeout = 150e-9;
  cfg.stack_capacity = 40;
  const BlockResult r = simulate_block(cfg, std::vector{w});
  CHECK(r.timeout_failures == 1);
  CHECK(r.overflow_failures == 1);
  cfg.timeout.reset();
  cfg.stack_capacity = 49;
  const BlockResult ok = simulate_block(cfg, std::vector{w});
  CHECK(ok.timeout_failures == 0);
  CHECK(ok.overflow_failures == 0);
  CHECK(cfg.timeout_seconds() == doctest::Approx(11e-6));
}

TEST_CASE("block constraint") {
  CHECK(check_block_constraint(0, 11, 1e-3, 2));
  CHECK(check_block_constraint(1e-9, 11, 1e-3, 2));
  CHECK_FALSE(check_block_constraint(2e-9, 11, 1e-3, 2));
  CHECK_THROWS_AS(check_block_constraint(0, 11, 1e-3, 0), ParameterError);
}

TEST_CASE("log-linear fit recovers an exact exponential") {
  std::vector<double> xs, ys;
  for (int s = 5; s <= 20; ++s) {
    xs.push_back(s);
    ys.push_back(0.3 * std::exp(-0.25 * s));
  }
  const TailFit f = fit_log_linear(xs, ys);
  CHECK(f.slope == doctest::Approx(-0.25));
  CHECK(f.intercept == doctest::Approx(std::log(0.3)));
  CHECK(f.r2 == doctest::Approx(1.0));
  CHECK(f.points == 16);
}

TEST_CASE("stack sizing") {
  CHECK(size_stack(11, 0.0, 10, 1).entries == 0);
  CHECK_THROWS_AS(size_stack(3, 1e-2, 1000, 1), ParameterError);
  const StackSizing s = size_stack(3, 1e-2, 100000, 1);
  CHECK_FALSE(s.extrapolated);
  CHECK(s.tail_probability <= s.target);
  CHECK(s.entries <= s.max_observed);
}

TEST_CASE("resource savings") {
  const ResourceSummary r = resource_savings(1000, 11, 80);
  CHECK(r.baseline_dfs == 2000);
  CHECK(r.dfs == 500);
  CHECK(r.grgen == 1000);
  CHECK(r.corr == 500);
  CHECK(r.blocks == 500);
  CHECK(r.baseline_total() > r.total());
  CHECK(r.root == doctest::Approx(r.baseline_root / 4));
  CHECK(r.stm == doctest::Approx(r.baseline_stm / 2));
  const ResourceSummary none = resource_savings(0, 11, 80);
  CHECK(none.total() == 0);
  CHECK(none.baseline_total() == 0);
  CHECK(none.dfs == 0);
  const ResourceSummary unshared = resource_savings(1000, 11, 80, {}, false);
  CHECK(unshared.root == doctest::Approx(r.baseline_root / 2));
}

TEST_CASE("workload sampler") {
  const DecodingGraph g(LatticeParams::for_distance(7));
  WorkloadSampler ws(g);
  UnionFindDecoder dec(g);
  for (std::uint64_t t = 0; t < 100; ++t) {
    const StreamWorkload w = ws.sample(0.01, 3, t, GrGenTiming::Estimate);
    const Syndrome syn = syndrome_of(g, sample_error(g, {0.01, 3, t}));
    ClusterSet& cs = dec.grow(syn);
    const auto stats = collect_stats(cs, dec.last_passes());
    REQUIRE(w.cluster_sizes.size() == stats.num_clusters());
    CHECK(w.grgen_reads == grgen_read_estimate(cluster_diameters(g, cs, stats.clusters)));
    const StreamWorkload tr = ws.from_syndrome(syn, GrGenTiming::Trace);
    GrGenEngine gg(g);
    CHECK(tr.grgen_reads == gg.run(syn).grgen);
    CHECK(tr.cluster_sizes == w.cluster_sizes);
  }
}
