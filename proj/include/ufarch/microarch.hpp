#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "ufarch/lattice.hpp"
#include "ufarch/noise.hpp"
#include "ufarch/uf_core.hpp"

namespace ufarch {

// Memory-level model of the three decoder units. Every memory read is
// counted; writes are read-modify-write and off the critical path, so they
// are free. One read is one STM row, one table entry or one stack entry.

enum class Pauli : std::uint8_t { I = 0, X = 1, Z = 2, Y = 3 };

/// Product modulo phase.
constexpr Pauli compose(Pauli a, Pauli b) {
  return static_cast<Pauli>(static_cast<std::uint8_t>(a) ^ static_cast<std::uint8_t>(b));
}
char to_char(Pauli p);

/// Correction applied to each edge in the previous logical cycle.
class PauliErrorLog {
 public:
  explicit PauliErrorLog(std::size_t num_edges) : log_(num_edges, Pauli::I) {}
  Pauli at(EdgeId e) const { return log_.at(e); }
  void set(EdgeId e, Pauli p) { log_.at(e) = p; }
  void apply(EdgeId e, Pauli p) { log_.at(e) = compose(log_.at(e), p); }
  std::size_t size() const { return log_.size(); }

 private:
  std::vector<Pauli> log_;
};

struct AccessTrace {
  std::uint64_t grgen = 0;
  std::uint64_t dfs = 0;
  std::uint64_t corr = 0;

  std::uint64_t total() const { return grgen + dfs + corr; }
  AccessTrace& operator+=(const AccessTrace& o) {
    grgen += o.grgen;
    dfs += o.dfs;
    corr += o.corr;
    return *this;
  }
  friend bool operator==(const AccessTrace&, const AccessTrace&) = default;
};

/// One bit per vertex and a two-bit half-edge counter per edge (one bit for
/// boundary edges), laid out in d*d rows, one per (layer, row) pair. A row
/// holds its vertices, their horizontal edges, the vertical edges to the next
/// row and the time edges to the next layer.
class SpanningTreeMemory {
 public:
  explicit SpanningTreeMemory(const DecodingGraph& graph);

  bool vertex_bit(VertexId v) const { return vertex_bits_[v] != 0; }
  void set_vertex_bit(VertexId v) { vertex_bits_[v] = 1; }
  std::uint8_t edge_bits(EdgeId e) const { return edge_bits_[e]; }
  void set_edge_bits(EdgeId e, std::uint8_t value) { edge_bits_[e] = value; }

  int row_of_vertex(VertexId v) const { return graph_->row_index(v); }
  int row_of_edge(EdgeId e) const { return edge_row_[e]; }
  int num_rows() const { return graph_->num_rows(); }

  bool row_all_zero(int row) const;
  std::size_t total_bits() const;
  void clear();

 private:
  const DecodingGraph* graph_;
  std::vector<std::uint8_t> vertex_bits_;
  std::vector<std::uint8_t> edge_bits_;
  std::vector<int> edge_row_;
  std::vector<std::vector<EdgeId>> row_edges_;
};

/// Per-row "contains a nonzero bit" flags for the STM.
class ZeroDataRegister {
 public:
  explicit ZeroDataRegister(int rows) : flags_(static_cast<std::size_t>(rows), 0) {}
  bool nonzero(int row) const { return flags_[static_cast<std::size_t>(row)] != 0; }
  void mark(int row) { flags_[static_cast<std::size_t>(row)] = 1; }
  void clear() { std::fill(flags_.begin(), flags_.end(), 0); }
  int rows() const { return static_cast<int>(flags_.size()); }

 private:
  std::vector<std::uint8_t> flags_;
};

struct HardwareTables {
  std::vector<VertexId> root_table;
  std::vector<std::uint32_t> size_table;
  std::vector<std::uint8_t> parity_registers;  ///< indexed by cluster root
  std::vector<std::uint8_t> boundary_registers;
  std::vector<std::uint32_t> growth_registers;
  std::vector<EdgeId> fusion_edge_stack;
  std::array<VertexId, kFindCompressionSlots> traversal_registers{};

  explicit HardwareTables(std::size_t num_vertices = 0);
  void clear();
};

/// Graph generator: grows clusters through the STM, ZDR and tables.
class GrGenEngine {
 public:
  explicit GrGenEngine(const DecodingGraph& graph, bool check_zdr = true);

  /// Loads the syndrome and grows until no odd, boundary-free cluster remains.
  AccessTrace run(const Syndrome& syn);

  /// Root lookup through the root table with traversal-register compression.
  /// Each root-table entry visited adds one to `reads` when given.
  VertexId find(VertexId v, std::uint64_t* reads = nullptr);

  const SpanningTreeMemory& stm() const { return stm_; }
  const ZeroDataRegister& zdr() const { return zdr_; }
  const HardwareTables& tables() const { return tables_; }
  std::uint32_t passes() const { return passes_; }
  const DecodingGraph& graph() const { return *graph_; }

  /// True when every ZDR flag agrees with its STM row; checked after each pass.
  bool zdr_consistent() const;
  bool zdr_checks_passed() const { return zdr_ok_; }

  bool in_cluster(VertexId v) const { return stm_.vertex_bit(v); }
  bool odd(VertexId root) const { return tables_.parity_registers[root] != 0; }
  bool frozen(VertexId root) const { return tables_.boundary_registers[root] != 0; }
  std::uint32_t cluster_size(VertexId root) const { return tables_.size_table[root]; }
  std::uint32_t growth_steps(VertexId root) const { return tables_.growth_registers[root]; }

  /// Cluster summaries ordered by root id.
  std::vector<ClusterStats> clusters();

 private:
  void reset();
  void read_row(int row, AccessTrace& trace);

  const DecodingGraph* graph_;
  SpanningTreeMemory stm_;
  ZeroDataRegister zdr_;
  HardwareTables tables_;
  std::vector<VertexId> touched_;
  std::vector<EdgeId> touched_edges_;
  std::vector<std::uint32_t> row_stamp_;
  std::vector<std::uint32_t> edge_stamp_;
  std::vector<VertexId> edge_stamp_root_;
  std::vector<std::uint32_t> root_stamp_;
  std::uint32_t stamp_ = 0;
  std::uint32_t passes_ = 0;
  bool check_zdr_;
  bool zdr_ok_ = true;
};

/// Edge stack entry: the edge, which endpoint is leaf-ward and that
/// endpoint's syndrome bit, so the correction engine never reads the STM.
struct StackEntry {
  EdgeId edge = 0;
  bool leaf_is_u = false;
  bool leaf_defect = false;
};

class EdgeStack {
 public:
  explicit EdgeStack(std::size_t capacity = 0) : capacity_(capacity) {}
  std::size_t capacity() const { return capacity_; }  ///< 0 means unbounded
  /// Returns false once the capacity is exceeded; the entry is still kept so
  /// the traversal can be inspected.
  bool push(StackEntry entry);
  std::span<const StackEntry> entries() const { return entries_; }
  bool overflowed() const { return overflowed_; }
  void clear();

 private:
  std::size_t capacity_;
  std::vector<StackEntry> entries_;
  bool overflowed_ = false;
};

struct ClusterTraversal {
  VertexId root = 0;  ///< DFS start vertex, virtual for boundary clusters
  bool boundary_rooted = false;
  std::uint32_t num_vertices = 0;
  int stack_index = 0;  ///< which of the two edge stacks holds the list
  EdgeStack stack;
  bool overflow = false;
};

struct DfsResult {
  std::vector<ClusterTraversal> clusters;
  AccessTrace trace;
  std::uint32_t overflow_events = 0;
};

/// Spanning-forest construction over the STM left by the graph generator.
/// stack_capacity = 0 disables overflow detection.
DfsResult run_dfs(GrGenEngine& grgen, const Syndrome& syn, std::size_t stack_capacity = 0);

struct CorrResult {
  Correction correction;
  AccessTrace trace;
};

/// Peels every traversal in reverse push order using syndrome-hold registers
/// and folds each corrected edge into the Pauli error log.
CorrResult run_corr(const DecodingGraph& graph, std::span<const ClusterTraversal> clusters,
                    PauliErrorLog& error_log, Pauli correction_type = Pauli::X);

struct PipelineResult {
  Correction correction;
  AccessTrace trace;
  std::uint32_t overflow_events = 0;
  std::vector<ClusterStats> clusters;
};

/// Gr-Gen, DFS and Corr engines run back to back on one syndrome.
class MicroarchDecoder {
 public:
  explicit MicroarchDecoder(const DecodingGraph& graph, std::size_t stack_capacity = 0);

  PipelineResult decode(const Syndrome& syn, Pauli correction_type = Pauli::X);
  PauliErrorLog& error_log() { return log_; }
  GrGenEngine& grgen() { return grgen_; }

 private:
  const DecodingGraph* graph_;
  GrGenEngine grgen_;
  std::size_t stack_capacity_;
  PauliErrorLog log_;
};

struct MemoryFootprint {
  double stm_bits = 0;
  double table_bits = 0;       ///< per table; root and size tables
  double parity_bits = 0;
  double zdr_bits = 0;
  double edge_stack_bits = 0;  ///< per stack; two stacks

  double total_bits() const {
    return stm_bits + 2 * table_bits + parity_bits + zdr_bits + 2 * edge_stack_bits;
  }
  double total_bytes() const { return total_bits() / 8.0; }
};

/// Memory-table formulas. With `stack_entries` set, each edge stack holds
/// that many entries of 3 log2(d) bits instead of the worst case 3 d^3 log2(d).
MemoryFootprint memory_footprint(int d, std::optional<double> stack_entries = std::nullopt);

/// Exact STM size of a constructed graph: one bit per internal vertex, two
/// per internal edge, one per boundary edge.
std::size_t stm_exact_bits(const DecodingGraph& graph);

/// Sum over clusters of 1^2 + 2^2 + ... + diam^2.
std::uint64_t grgen_read_estimate(std::span<const std::uint32_t> diameters);

/// Sum over clusters of |V(C)|; the DFS and Corr engines both read this many.
std::uint64_t stage_read_estimate(std::span<const std::uint32_t> cluster_sizes);

double reads_to_seconds(double reads, double clock_hz = 4e9, double latency_cycles = 4);

/// Lower bound on blossom-matching memory: 161 bits per edge of the complete
/// graph over w = ceil(2 p 3 d^3) defects, or over d-1 defects if larger.
double mwpm_memory_bound(int d, double p);

}  // namespace ufarch
