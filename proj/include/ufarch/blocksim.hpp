#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ufarch/lattice.hpp"
#include "ufarch/microarch.hpp"
#include "ufarch/uf_core.hpp"

namespace ufarch {

/// (streams, Gr-Gen units, DFS engines, Corr engines). Streams are syndrome
/// streams: two per logical qubit, one per error type.
struct BlockShape {
  int streams = 4;
  int grgen = 2;
  int dfs = 1;
  int corr = 1;

  static BlockShape parse(const std::string& text);  ///< "4,2,1,1"
  std::string to_string() const;
  void validate() const;
};

/// How the Gr-Gen service time of a stream is derived.
enum class GrGenTiming {
  Estimate,  ///< sum over clusters of 1^2 + ... + diam^2
  Trace,     ///< reads counted by the Gr-Gen engine model
};

struct BlockConfig {
  BlockShape shape;
  int d = 11;
  std::size_t stack_capacity = 0;  ///< edge-stack entries, 0 = unbounded
  double clock_hz = 4e9;
  double latency_cycles = 4;
  double t_round = 1e-6;           ///< seconds per syndrome round
  std::optional<double> timeout;   ///< defaults to d * t_round
  bool shared_tables = false;      ///< Gr-Gen units share one root/size table
  GrGenTiming grgen_timing = GrGenTiming::Estimate;

  double timeout_seconds() const { return timeout.value_or(d * t_round); }
  double seconds(double reads) const { return reads_to_seconds(reads, clock_hz, latency_cycles); }
  void validate() const;
};

/// Work produced by one stream's Gr-Gen run.
struct StreamWorkload {
  std::uint64_t grgen_reads = 0;
  std::vector<std::uint32_t> cluster_sizes;  ///< |V(C)| in DFS order
  std::vector<std::uint32_t> tree_edges;     ///< spanning-tree edges per cluster
};

struct BlockResult {
  std::vector<double> completion;  ///< per stream, seconds
  double makespan = 0;             ///< latest stream completion
  std::uint32_t timeout_failures = 0;
  std::uint32_t overflow_failures = 0;
  std::vector<double> grgen_busy;  ///< per unit, seconds
  std::vector<double> dfs_busy;
  std::vector<double> corr_busy;

  /// Busy fraction of each unit over the makespan.
  std::vector<double> utilization(const std::vector<double>& busy) const;
};

/// Schedule of one block over one logical cycle. Gr-Gen units serve their
/// streams back to back. Clusters then pass through the DFS and Corr engines
/// one at a time, each taking the earliest free engine. The service order is
/// the one a single DFS engine would follow when it always serves the stream
/// ready longest (ties round robin), so extra engines never delay a stream.
/// Each DFS engine brings two edge stacks; a stack stays held until the
/// correction of its cluster ends, so Corr on one cluster overlaps DFS on the
/// next.
BlockResult simulate_block(const BlockConfig& cfg, std::span<const StreamWorkload> workloads);

/// Builds one stream's workload by growing clusters on a sampled syndrome.
class WorkloadSampler {
 public:
  explicit WorkloadSampler(const DecodingGraph& graph);
  StreamWorkload sample(double p, std::uint64_t seed, std::uint64_t stream_index,
                        GrGenTiming timing);
  StreamWorkload from_syndrome(const Syndrome& syn, GrGenTiming timing);

 private:
  const DecodingGraph* graph_;
  UnionFindDecoder decoder_;
  GrGenEngine grgen_;
};

/// p_tof / n_logical <= p_Log(d, p).
bool check_block_constraint(double p_tof, int d, double p, int n_logical);

struct TailFit {
  double slope = 0;      ///< d ln(P) / ds
  double intercept = 0;
  double r2 = 0;
  std::size_t points = 0;

  double log_probability(double s) const { return intercept + slope * s; }
};

/// Least-squares line through (x, ln y) for positive y.
TailFit fit_log_linear(std::span<const double> xs, std::span<const double> ys);

struct StackSizing {
  std::uint32_t entries = 0;          ///< S(d, p)
  double tail_probability = 0;        ///< estimated P(max tree edges > S)
  double target = 0;                  ///< p_Log(d, p)
  bool extrapolated = false;
  TailFit fit;
  std::uint32_t max_observed = 0;
  std::uint64_t trials = 0;
};

/// Smallest edge-stack size S such that the chance of a decoding producing a
/// spanning tree with more than S edges stays below p_Log(d, p). Measured
/// directly when p_Log is within Monte Carlo reach, otherwise extrapolated
/// from an exponential fit to the tail.
StackSizing size_stack(int d, double p, std::uint64_t trials, std::uint64_t seed,
                       unsigned workers = 0);

struct ResourceSummary {
  int logical_qubits = 0;
  int d = 0;
  double stack_entries = 0;
  BlockShape shape;
  int blocks = 0;
  // Unit counts.
  int baseline_grgen = 0, baseline_dfs = 0, baseline_corr = 0;
  int grgen = 0, dfs = 0, corr = 0;
  // Memory in bytes.
  double baseline_stm = 0, baseline_root = 0, baseline_size = 0, baseline_stacks = 0;
  double stm = 0, root = 0, size = 0, stacks = 0;

  double baseline_total() const { return baseline_stm + baseline_root + baseline_size + baseline_stacks; }
  double total() const { return stm + root + size + stacks; }
  double reduction() const { return total() > 0 ? baseline_total() / total() : 0; }
};

/// Units and memory for L logical qubits: the baseline gives every stream a
/// full decoder; the block design shares DFS/Corr engines and one root and
/// size table per block.
ResourceSummary resource_savings(int logical_qubits, int d, double stack_entries,
                                 BlockShape shape = {}, bool shared_tables = true);

}  // namespace ufarch
