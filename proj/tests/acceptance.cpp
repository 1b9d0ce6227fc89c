// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fail.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <string>
#include <vector>

#include "ufarch/experiments.hpp"

using namespace ufarch;

namespace {

int failures = 0;

void report(int id, bool ok, const std::string& what) {
  std::printf("[%s] %2d %s\n", ok ? "PASS" : "FAIL", id, what.c_str());
  std::fflush(stdout);
  if (!ok) ++failures;
}

std::string str(const char* fmt, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, fmt, args...);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

bool within(double value, double target, double rel) {
  return std::abs(value - target) <= rel * target;
}

void exhaustive_d3() {
  const auto t0 = std::chrono::steady_clock::now();
  const DecodingGraph g(LatticeParams::for_distance(3));
  UnionFindDecoder dec(g);
  int bad = 0;
  for (EdgeId e = 0; e < g.num_edges(); ++e) {
    ErrorPattern err(g.num_edges());
    err.set(e);
    const DecodeResult r = dec.decode(syndrome_of(g, err));
    if (!assess(g, err, r.correction).success) ++bad;
  }
  const double dt = seconds_since(t0);
  report(1, bad == 0 && g.num_edges() == 51 && dt < 1.0,
         str("single faults at d=3: %d/%zu failures in %.3f s", bad, g.num_edges(), dt));
}

void oracle_equivalence() {
  std::uint64_t mismatches = 0, total = 0;
  bool zdr = true;
  for (int d : {3, 5, 7, 11}) {
    const DecodingGraph g(LatticeParams::for_distance(d));
    UnionFindDecoder ref(g);
    MicroarchDecoder hw(g);
    for (double p : {1e-3, 1e-2}) {
      for (std::uint64_t t = 0; t < 10000; ++t) {
        const Syndrome syn = syndrome_of(g, sample_error(g, {p, 1000 + std::uint64_t(d), t}));
        if (hw.decode(syn).correction != ref.decode(syn).correction) ++mismatches;
        zdr = zdr && hw.grgen().zdr_checks_passed();
        ++total;
      }
    }
  }
  report(2, mismatches == 0 && zdr,
         str("engine vs reference corrections: %llu mismatches in %llu trials, ZDR %s",
             (unsigned long long)mismatches, (unsigned long long)total,
             zdr ? "consistent" : "INCONSISTENT"));
}

void logical_rate() {
  const LogicalRate r3 = run_logical_error_rate(3, 1e-2, 1000000, 3);
  const LogicalRate r5 = run_logical_error_rate(5, 1e-2, 1000000, 3);
  const bool factor = r3.rate >= 0.024 / 3 && r3.rate <= 0.024 * 3;
  report(3, factor && r5.rate < r3.rate,
         str("p_L(d=3,p=1e-2) = %.4g [%.4g, %.4g] vs 0.024 (factor %.2f); p_L(d=5) = %.3g",
             r3.rate, r3.ci.low, r3.ci.high, 0.024 / std::max(r3.rate, 1e-300), r5.rate));
}

void table2() {
  // Printed cells in bytes: STM, table, parity, ZDR, stack for d = 5, 15, 25.
  const int ds[] = {5, 15, 25};
  const double printed[3][5] = {{100, 100, 15, 46, 100},
                                {3000, 5000, 400, 1300, 5000},
                                {14000, 27000, 2000, 6000, 27000}};
  int ok = 0, cells = 0;
  double worst = 0;
  for (int i = 0; i < 3; ++i) {
    const MemoryFootprint m = memory_footprint(ds[i]);
    const double got[5] = {m.stm_bits / 8, m.table_bits / 8, m.parity_bits / 8, m.zdr_bits / 8,
                           m.edge_stack_bits / 8};
    for (int j = 0; j < 5; ++j) {
      const double dev = std::abs(got[j] - printed[i][j]) / printed[i][j];
      worst = std::max(worst, dev);
      ok += dev <= 0.15;
      ++cells;
    }
  }
  report(4, ok == cells,
         str("memory table: %d/%d cells within 15%% (worst %.1f%%)", ok, cells, 100 * worst));
}

void table3(double stack_entries) {
  const ResourceSummary r = resource_savings(1000, 11, stack_entries);
  const double base = r.baseline_total(), opt = r.total(), red = r.reduction();
  report(5, within(base, 9.96e6, 0.05) && within(opt, 2.81e6, 0.05) && red >= 3.3 && red <= 3.7,
         str("L=1000 d=11 S=%.0f: baseline %.3f MB (%+.1f%%), optimized %.3f MB (%+.1f%%), "
             "reduction %.2fx",
             stack_entries, base / 1e6, 100 * (base / 9.96e6 - 1), opt / 1e6,
             100 * (opt / 2.81e6 - 1), red));
}

void correlation() {
  const RuntimeCorrelation r = run_runtime_correlation(11, 1e-3, 10000, 6);
  report(6, r.ratio_of_means >= 1.5 && r.ratio_of_means <= 3 && r.pearson > 0.5,
         str("tau_GG/tau_DFS = %.3f (mean %.1f ns / %.1f ns), Pearson r = %.3f",
             r.ratio_of_means, r.mean_grgen * 1e9, r.mean_dfs * 1e9, r.pearson));
}

void block() {
  BlockConfig cfg;
  cfg.shape = BlockShape::parse("4,2,1,1");
  const BlockExec b = run_block_exec_distribution(cfg, 1e-3, 100000, 7);
  report(7, b.above_cutoff == 0 && b.mean < 1e-6,
         str("(4,2,1,1) d=11: %llu/%zu trials above 325 ns, max %.0f ns, mean %.1f ns, "
             "tail fit reaches 2 p_L at %.0f ns",
             (unsigned long long)b.above_cutoff, b.makespan.size(), b.max * 1e9, b.mean * 1e9,
             b.extrapolated_cutoff * 1e9));
}

void stack_sizing(const StackSizing& s) {
  const Histogram h = run_cluster_size_distribution(11, 1e-3, 1000000, 8);
  const bool ok = s.extrapolated && s.entries >= 40 && s.entries <= 160 && h.above(80) == 0 &&
                  h.tail.r2 > 0.95;
  report(8, ok,
         str("S(11,1e-3) = %u (extrapolated %s, tail %.2g); clusters > 80 in 1e6 trials: %llu; "
             "tail fit R^2 = %.3f over sizes 5-40",
             s.entries, s.extrapolated ? "yes" : "no", s.tail_probability,
             (unsigned long long)h.above(80), h.tail.r2));
}

void compression() {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> dens(0.0, 1.0);
  const Geometry geoms[] = {round_geometry(11), cycle_geometry(5), Geometry{7, 3, 2}};
  std::uint64_t bad = 0;
  for (int i = 0; i < 100000; ++i) {
    const Geometry g = geoms[i % 3];
    const double rho = std::pow(dens(rng), 3);
    BitSet x(g.size());
    for (std::size_t k = 0; k < x.size(); ++k) x[k] = dens(rng) < rho;
    bad += decode_sparse(encode_sparse(x)) != x;
    bad += decode_dzc(encode_dzc(x, 3)) != x;
    bad += decode_geo(encode_geo(x, g)) != x;
  }
  double d11 = 0;
  for (const auto& r : run_compression_sweep({11}, {1e-3}, 10000, 9, Framing::Round)) {
    if (r.scheme == "best") d11 = r.mean_ratio;
  }
  double d3 = 0, d21 = 0;
  for (const auto& r : run_compression_sweep({3}, {1e-3}, 10000, 9, Framing::Cycle)) {
    if (r.scheme == "best") d3 = r.mean_ratio;
  }
  for (const auto& r : run_compression_sweep({21}, {1e-4}, 5000, 9, Framing::Cycle)) {
    if (r.scheme == "best") d21 = r.mean_ratio;
  }
  const bool ok = bad == 0 && d11 >= 30 && d3 >= 10 && d3 <= 40 && d21 >= 200 && d21 <= 800;
  report(9, ok,
         str("roundtrip failures %llu/300000; best ratio d=11 p=1e-3 per round %.1f; "
             "per cycle d=3 p=1e-3 %.1f, d=21 p=1e-4 %.1f",
             (unsigned long long)bad, d11, d3, d21));
}

void mwpm() {
  std::vector<int> ds;
  for (int d = 3; d <= 41; d += 2) ds.push_back(d);
  const auto rows = mwpm_comparison(ds, 1e-3, 80);
  const auto cross = mwpm_crossover(rows);
  const auto full = mwpm_crossover(rows, &MwpmRow::uf_full_bits);
  report(10, cross && *cross >= 12 && *cross <= 25,
         str("UF below matching bound from d=%d (unique crossover %s); "
             "counting both tables and stacks: d=%d",
             cross.value_or(-1), cross ? "yes" : "no", full.value_or(-1)));
}

void properties() {
  bool ok = true;
  std::string notes;
  // Syndrome linearity.
  {
    const DecodingGraph g(LatticeParams::for_distance(7));
    bool lin = true;
    for (std::uint64_t t = 0; t < 2000; ++t) {
      const ErrorPattern a = sample_error(g, {0.03, 1, t}), b = sample_error(g, {0.03, 2, t});
      lin = lin && syndrome_of(g, a ^ b) == (syndrome_of(g, a) ^ syndrome_of(g, b));
    }
    ok = ok && lin;
    notes += lin ? "linearity ok" : "linearity FAILED";
  }
  // Growth invariant and correction cancels the syndrome.
  {
    bool inv = true, cancel = true;
    for (int d : {3, 5, 7, 9, 11}) {
      const DecodingGraph g(LatticeParams::for_distance(d));
      UnionFindDecoder dec(g);
      for (std::uint64_t t = 0; t < 2000; ++t) {
        const ErrorPattern err = sample_error(g, {0.002 + 0.004 * (t % 5), 3, t});
        const Syndrome syn = syndrome_of(g, err);
        ClusterSet& cs = dec.grow(syn);
        for (VertexId r : cs.roots()) inv = inv && (!cs.odd(r) || cs.touches_boundary(r));
        const DecodeResult res = dec.decode(syn);
        cancel = cancel && syndrome_of(g, res.correction) == syn;
      }
    }
    ok = ok && inv && cancel;
    notes += inv ? ", parity/boundary ok" : ", parity/boundary FAILED";
    notes += cancel ? ", cancellation ok" : ", cancellation FAILED";
  }
  // Block monotonicity on sampled workloads.
  {
    const DecodingGraph g(LatticeParams::for_distance(11));
    WorkloadSampler ws(g);
    bool mono = true;
    for (std::uint64_t t = 0; t < 2000; ++t) {
      std::vector<StreamWorkload> w;
      for (int s = 0; s < 4; ++s) w.push_back(ws.sample(3e-3, 11, 4 * t + s, GrGenTiming::Estimate));
      BlockConfig cfg;
      std::vector<double> prev;
      for (auto [dfs, corr] : {std::pair{1, 1}, {1, 2}, {2, 2}}) {
        cfg.shape = {4, 2, dfs, corr};
        const BlockResult r = simulate_block(cfg, w);
        for (std::size_t s = 0; s < prev.size(); ++s) mono = mono && r.completion[s] <= prev[s] + 1e-15;
        prev = r.completion;
      }
    }
    ok = ok && mono;
    notes += mono ? ", block monotonicity ok" : ", block monotonicity FAILED";
  }
  // Deterministic replay under varying worker counts.
  {
    const LogicalRate a = run_logical_error_rate(5, 1e-2, 20000, 4, 1);
    const LogicalRate b = run_logical_error_rate(5, 1e-2, 20000, 4, 4);
    BlockConfig cfg;
    const BlockExec x = run_block_exec_distribution(cfg, 1e-3, 10000, 4, 1);
    const BlockExec y = run_block_exec_distribution(cfg, 1e-3, 10000, 4, 3);
    const bool det = a.failures == b.failures && x.makespan == y.makespan;
    ok = ok && det;
    notes += det ? ", replay ok" : ", replay FAILED";
  }
  report(11, ok, "property suites: " + notes);
}

}  // namespace

int main() {
  exhaustive_d3();
  oracle_equivalence();
  logical_rate();
  table2();
  // The memory totals use the stack size found by the sizing run.
  const StackSizing sizing = size_stack(11, 1e-3, 100000, 8);
  table3(sizing.entries);
  correlation();
  block();
  stack_sizing(sizing);
  compression();
  mwpm();
  properties();
  std::printf("%d criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
