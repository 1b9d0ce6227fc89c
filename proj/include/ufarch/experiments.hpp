#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ufarch/blocksim.hpp"
#include "ufarch/codec.hpp"

namespace ufarch {

struct ExperimentSpec {
  std::string name;
  std::vector<int> d_list{11};
  std::vector<double> p_list{1e-3};
  std::uint64_t trials = 10000;
  std::uint64_t seed = 1;
  std::string out;       ///< output directory, empty for stdout
  unsigned workers = 0;  ///< 0 = all cores; never changes results

  void validate() const;
  /// 16 hex digits identifying (name, d_list, p_list, trials, seed).
  std::string hash() const;
};

struct Interval {
  double low = 0;
  double high = 0;
};

/// Wilson score interval for k successes in n trials.
Interval wilson_interval(std::uint64_t k, std::uint64_t n, double z = 1.96);

struct LogicalRate {
  int d = 0;
  double p = 0;
  std::uint64_t failures = 0;
  std::uint64_t trials = 0;
  double rate = 0;
  Interval ci;
  double predicted = 0;  ///< 0.15 (40p)^((d+1)/2)
  double mean_clusters = 0;
};

LogicalRate run_logical_error_rate(int d, double p, std::uint64_t trials, std::uint64_t seed,
                                   unsigned workers = 0);

/// Counts indexed by value (counts[v] = occurrences of v).
struct Histogram {
  std::vector<std::uint64_t> counts;
  std::uint64_t total = 0;
  TailFit tail;  ///< log-linear fit of P(X > s)

  void add(std::size_t value, std::uint64_t n = 1);
  void merge(const Histogram& other);
  std::uint64_t above(std::size_t value) const;  ///< occurrences of values > value
  std::size_t mode() const;
  std::size_t max_value() const { return counts.empty() ? 0 : counts.size() - 1; }
  /// Fits ln P(X > s) for s in [lo, hi] where the tail is nonzero.
  void fit_tail(std::size_t lo, std::size_t hi);
};

/// Per-cluster vertex counts after growth, tail fitted over sizes 5..40.
Histogram run_cluster_size_distribution(int d, double p, std::uint64_t trials,
                                        std::uint64_t seed, unsigned workers = 0);

struct RuntimeCorrelation {
  std::vector<std::pair<double, double>> points;  ///< (tau_GG, tau_DFS) seconds
  double mean_grgen = 0;
  double mean_dfs = 0;
  double ratio_of_means = 0;
  double pearson = 0;
};

RuntimeCorrelation run_runtime_correlation(int d, double p, std::uint64_t trials,
                                           std::uint64_t seed,
                                           GrGenTiming timing = GrGenTiming::Estimate,
                                           unsigned workers = 0);

struct BlockExec {
  std::vector<double> makespan;  ///< per trial, seconds
  std::uint64_t timeout_failures = 0;
  std::uint64_t overflow_failures = 0;
  std::uint64_t streams = 0;
  double mean = 0;
  double max = 0;
  std::uint64_t above_cutoff = 0;
  double cutoff = 325e-9;
  TailFit tail;                 ///< ln P(makespan > t) against t in ns
  double extrapolated_cutoff = 0;  ///< t with fitted tail = N p_Log, seconds
};

/// Samples one workload per stream per trial and schedules the block.
BlockExec run_block_exec_distribution(const BlockConfig& cfg, double p, std::uint64_t trials,
                                      std::uint64_t seed, unsigned workers = 0);

enum class Framing { Round, Cycle };

std::string to_string(Framing f);
Framing parse_framing(const std::string& name);

struct CompressionRow {
  int d = 0;
  double p = 0;
  Framing framing = Framing::Round;
  std::string scheme;       ///< sparse, dzc, geo or best
  double mean_ratio = 0;    ///< mean over frames of raw / wire bits
  double mean_nominal_ratio = 0;  ///< same with nominal bit accounting
  double mean_wire_bits = 0;
  std::uint64_t frames = 0;
};

std::vector<CompressionRow> run_compression_sweep(const std::vector<int>& d_list,
                                                  const std::vector<double>& p_list,
                                                  std::uint64_t trials, std::uint64_t seed,
                                                  Framing framing, const CodecConfig& cfg = {},
                                                  unsigned workers = 0);

struct MemoryRow {
  int d = 0;
  std::string component;
  std::string formula;
  double bits = 0;
  double bytes() const { return bits / 8; }
};

/// The five memory components of one decoder for each distance.
std::vector<MemoryRow> memory_table(const std::vector<int>& d_list);

struct MwpmRow {
  int d = 0;
  double uf_table_bits = 0;  ///< one of each table row, worst-case stacks
  double uf_full_bits = 0;   ///< both tables and both worst-case stacks
  double uf_sized_bits = 0;  ///< both tables, stacks of the given size
  double mwpm_bits = 0;
};

std::vector<MwpmRow> mwpm_comparison(const std::vector<int>& d_list, double p,
                                     double stack_entries);

/// First distance from which `uf(row) < mwpm` holds for every later row, if
/// the comparison changes sign exactly once.
std::optional<int> mwpm_crossover(const std::vector<MwpmRow>& rows,
                                  double MwpmRow::*uf = &MwpmRow::uf_table_bits);

std::string format_bytes(double bytes);

void write_csv(std::ostream& os, const std::vector<LogicalRate>& rows, const std::string& hash);
void write_csv(std::ostream& os, const Histogram& h, const std::string& hash);
void write_csv(std::ostream& os, const RuntimeCorrelation& r, const std::string& hash);
void write_csv(std::ostream& os, const BlockExec& b, double bin_seconds, const std::string& hash);
void write_csv(std::ostream& os, const std::vector<CompressionRow>& rows, const std::string& hash);
void write_csv(std::ostream& os, const std::vector<MemoryRow>& rows, const std::string& hash);
void write_csv(std::ostream& os, const std::vector<MwpmRow>& rows, const std::string& hash);
void write_csv(std::ostream& os, const ResourceSummary& r, const std::string& hash);

}  // namespace ufarch
