#include "ufarch/microarch.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace ufarch {

char to_char(Pauli p) {
  switch (p) {
    case Pauli::I: return 'I';
    case Pauli::X: return 'X';
    case Pauli::Z: return 'Z';
    case Pauli::Y: return 'Y';
  }
  return '?';
}

// ---------------------------------------------------------------------------
// STM / ZDR / tables

SpanningTreeMemory::SpanningTreeMemory(const DecodingGraph& graph)
    : graph_(&graph),
      vertex_bits_(graph.num_internal_vertices(), 0),
      edge_bits_(graph.num_edges(), 0),
      edge_row_(graph.num_edges(), 0),
      row_edges_(static_cast<std::size_t>(graph.num_rows())) {
  for (EdgeId e = 0; e < graph.num_edges(); ++e) {
    // Every edge lives in the row of its lower endpoint.
    edge_row_[e] = graph.row_index(graph.edge(e).u);
    row_edges_[static_cast<std::size_t>(edge_row_[e])].push_back(e);
  }
}

bool SpanningTreeMemory::row_all_zero(int row) const {
  const auto cols = static_cast<VertexId>(graph_->cols());
  const VertexId first = static_cast<VertexId>(row) * cols;
  for (VertexId v = first; v < first + cols; ++v) {
    if (vertex_bits_[v]) return false;
  }
  for (EdgeId e : row_edges_[static_cast<std::size_t>(row)]) {
    if (edge_bits_[e]) return false;
  }
  return true;
}

std::size_t SpanningTreeMemory::total_bits() const { return stm_exact_bits(*graph_); }

void SpanningTreeMemory::clear() {
  std::fill(vertex_bits_.begin(), vertex_bits_.end(), 0);
  std::fill(edge_bits_.begin(), edge_bits_.end(), 0);
}

HardwareTables::HardwareTables(std::size_t num_vertices)
    : root_table(num_vertices),
      size_table(num_vertices, 0),
      parity_registers(num_vertices, 0),
      boundary_registers(num_vertices, 0),
      growth_registers(num_vertices, 0) {
  for (std::size_t i = 0; i < num_vertices; ++i) root_table[i] = static_cast<VertexId>(i);
}

void HardwareTables::clear() { *this = HardwareTables(root_table.size()); }

// ---------------------------------------------------------------------------
// Gr-Gen

GrGenEngine::GrGenEngine(const DecodingGraph& graph, bool check_zdr)
    : graph_(&graph),
      stm_(graph),
      zdr_(graph.num_rows()),
      tables_(graph.num_internal_vertices()),
      row_stamp_(static_cast<std::size_t>(graph.num_rows()), 0),
      edge_stamp_(graph.num_edges(), 0),
      edge_stamp_root_(graph.num_edges(), kNoVertex),
      root_stamp_(graph.num_internal_vertices(), 0),
      check_zdr_(check_zdr) {}

void GrGenEngine::reset() {
  for (VertexId v : touched_) {
    tables_.root_table[v] = v;
    tables_.size_table[v] = 0;
    tables_.parity_registers[v] = 0;
    tables_.boundary_registers[v] = 0;
    tables_.growth_registers[v] = 0;
  }
  stm_.clear();
  zdr_.clear();
  touched_.clear();
  touched_edges_.clear();
  tables_.fusion_edge_stack.clear();
  passes_ = 0;
  zdr_ok_ = true;
}

void GrGenEngine::read_row(int row, AccessTrace& trace) {
  auto& stamp = row_stamp_[static_cast<std::size_t>(row)];
  if (stamp == stamp_) return;
  stamp = stamp_;
  ++trace.grgen;
}

VertexId GrGenEngine::find(VertexId v, std::uint64_t* reads) {
  auto& regs = tables_.traversal_registers;
  int count = 0;
  VertexId x = v;
  while (true) {
    if (reads) ++*reads;
    const VertexId next = tables_.root_table[x];
    if (next == x) break;
    regs[static_cast<std::size_t>(count % kFindCompressionSlots)] = x;
    ++count;
    x = next;
  }
  for (int i = 0; i < std::min(count, kFindCompressionSlots); ++i) {
    tables_.root_table[regs[static_cast<std::size_t>(i)]] = x;
  }
  return x;
}

bool GrGenEngine::zdr_consistent() const {
  for (int r = 0; r < stm_.num_rows(); ++r) {
    if (zdr_.nonzero(r) == stm_.row_all_zero(r)) return false;
  }
  return true;
}

AccessTrace GrGenEngine::run(const Syndrome& syn) {
  const DecodingGraph& g = *graph_;
  if (syn.size() != g.num_internal_vertices()) {
    throw ContractViolation("syndrome length does not match the graph");
  }
  reset();
  for_each_set_bit(syn, [&](VertexId v) {
    stm_.set_vertex_bit(v);
    zdr_.mark(stm_.row_of_vertex(v));
    tables_.size_table[v] = 1;
    tables_.parity_registers[v] = 1;
    touched_.push_back(v);
  });

  AccessTrace trace;
  const auto cols = static_cast<VertexId>(g.cols());
  auto& fes = tables_.fusion_edge_stack;
  while (true) {
    ++trace.grgen;  // parity register scan
    bool any_odd = false;
    for (VertexId v : touched_) {
      if (tables_.root_table[v] == v && odd(v) && !frozen(v)) {
        any_odd = true;
        break;
      }
    }
    if (!any_odd) break;
    ++passes_;
    ++stamp_;

    // Growth phase: walk the non-zero STM rows in order.
    for (int row = 0; row < stm_.num_rows(); ++row) {
      if (!zdr_.nonzero(row)) continue;
      read_row(row, trace);
      const VertexId first = static_cast<VertexId>(row) * cols;
      for (VertexId v = first; v < first + cols; ++v) {
        if (!stm_.vertex_bit(v)) continue;
        const VertexId r = find(v, &trace.grgen);
        if (!odd(r) || frozen(r)) continue;
        if (root_stamp_[r] != stamp_) {
          root_stamp_[r] = stamp_;
          ++tables_.growth_registers[r];
        }
        for (const Incidence& inc : g.neighbors(v)) {
          const EdgeId e = inc.edge;
          const int erow = stm_.row_of_edge(e);
          read_row(erow, trace);
          const std::uint8_t s = stm_.edge_bits(e);
          if (s >= 2) continue;
          if (edge_stamp_[e] == stamp_ && edge_stamp_root_[e] == r) continue;
          edge_stamp_[e] = stamp_;
          edge_stamp_root_[e] = r;
          if (s == 0) touched_edges_.push_back(e);
          stm_.set_edge_bits(e, static_cast<std::uint8_t>(s + 1));
          zdr_.mark(erow);
          if (s + 1 == 2) fes.push_back(e);
        }
      }
    }

    // Fusion phase: pop newly grown edges and merge.
    while (!fes.empty()) {
      const EdgeId e = fes.back();
      fes.pop_back();
      ++trace.grgen;
      const Edge& ed = g.edge(e);
      if (g.is_virtual(ed.v)) {
        tables_.boundary_registers[find(ed.u, &trace.grgen)] = 1;
        continue;
      }
      for (VertexId x : {ed.u, ed.v}) {
        if (stm_.vertex_bit(x)) continue;
        stm_.set_vertex_bit(x);
        zdr_.mark(stm_.row_of_vertex(x));
        tables_.size_table[x] = 1;
        touched_.push_back(x);
      }
      VertexId a = find(ed.u, &trace.grgen);
      VertexId b = find(ed.v, &trace.grgen);
      if (a == b) continue;
      trace.grgen += 2;  // size table reads
      auto& size = tables_.size_table;
      if (size[a] < size[b] || (size[a] == size[b] && b < a)) std::swap(a, b);
      tables_.root_table[b] = a;
      size[a] += size[b];
      tables_.parity_registers[a] ^= tables_.parity_registers[b];
      tables_.boundary_registers[a] |= tables_.boundary_registers[b];
      tables_.growth_registers[a] =
          std::max(tables_.growth_registers[a], tables_.growth_registers[b]);
    }
    if (check_zdr_ && !zdr_consistent()) zdr_ok_ = false;
  }
  return trace;
}

std::vector<ClusterStats> GrGenEngine::clusters() {
  std::vector<ClusterStats> out;
  for (VertexId v : touched_) {
    if (tables_.root_table[v] == v) {
      out.push_back({v, cluster_size(v), growth_steps(v), frozen(v)});
    }
  }
  std::sort(out.begin(), out.end(),
            [](const ClusterStats& a, const ClusterStats& b) { return a.root < b.root; });
  return out;
}

// ---------------------------------------------------------------------------
// DFS engine

bool EdgeStack::push(StackEntry entry) {
  entries_.push_back(entry);
  if (capacity_ != 0 && entries_.size() > capacity_) overflowed_ = true;
  return !overflowed_;
}

void EdgeStack::clear() {
  entries_.clear();
  overflowed_ = false;
}

DfsResult run_dfs(GrGenEngine& grgen, const Syndrome& syn, std::size_t stack_capacity) {
  const DecodingGraph& g = grgen.graph();
  const SpanningTreeMemory& stm = grgen.stm();
  const ZeroDataRegister& zdr = grgen.zdr();
  const auto cols = static_cast<VertexId>(g.cols());
  const auto n = static_cast<VertexId>(g.num_internal_vertices());

  DfsResult out;
  std::vector<std::uint8_t> visited(n, 0);
  std::vector<std::pair<VertexId, std::uint32_t>> pending;

  auto push_edge = [&](ClusterTraversal& ct, EdgeId e, VertexId leaf) {
    const bool leaf_is_u = g.edge(e).u == leaf;
    ct.stack.push({e, leaf_is_u, syn.test(leaf)});
  };

  for (int row = 0; row < stm.num_rows(); ++row) {
    if (!zdr.nonzero(row)) continue;
    ++out.trace.dfs;
    const VertexId first = static_cast<VertexId>(row) * cols;
    for (VertexId v = first; v < first + cols; ++v) {
      if (!stm.vertex_bit(v) || visited[v]) continue;
      const VertexId r = grgen.find(v, &out.trace.dfs);
      if (grgen.odd(r) && !grgen.frozen(r)) {
        throw ContractViolation("DFS reached an odd cluster that does not touch the boundary");
      }
      ClusterTraversal ct;
      ct.root = v;
      ct.num_vertices = grgen.cluster_size(r);
      ct.stack_index = static_cast<int>(out.clusters.size() % 2);
      ct.stack = EdgeStack(stack_capacity);
      VertexId start = v;

      if (grgen.frozen(r)) {
        bool found = false;
        for (VertexId x = v; x < n && !found; ++x) {
          if (x % cols == 0 && !zdr.nonzero(static_cast<int>(x / cols))) {
            x += cols - 1;
            continue;
          }
          if (!stm.vertex_bit(x) || visited[x]) continue;
          if (grgen.find(x, &out.trace.dfs) != r) continue;
          for (const Incidence& inc : g.neighbors(x)) {
            if (g.is_virtual(inc.vertex) && stm.edge_bits(inc.edge) == 2) {
              ct.root = inc.vertex;
              ct.boundary_rooted = true;
              push_edge(ct, inc.edge, x);
              start = x;
              found = true;
              break;
            }
          }
        }
        if (!found) throw InvariantViolation("frozen cluster has no grown boundary edge");
      }

      visited[start] = 1;
      pending.clear();
      pending.emplace_back(start, 0);
      ++out.trace.dfs;
      while (!pending.empty()) {
        const VertexId x = pending.back().first;
        const auto nbrs = g.neighbors(x);
        std::uint32_t& next = pending.back().second;
        if (next == nbrs.size()) {
          pending.pop_back();
          continue;
        }
        const Incidence& inc = nbrs[next++];
        if (g.is_virtual(inc.vertex) || stm.edge_bits(inc.edge) != 2 || visited[inc.vertex]) {
          continue;
        }
        visited[inc.vertex] = 1;
        push_edge(ct, inc.edge, inc.vertex);
        pending.emplace_back(inc.vertex, 0);
        ++out.trace.dfs;
      }
      ct.overflow = ct.stack.overflowed();
      if (ct.overflow) ++out.overflow_events;
      out.clusters.push_back(std::move(ct));
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Corr engine

CorrResult run_corr(const DecodingGraph& graph, std::span<const ClusterTraversal> clusters,
                    PauliErrorLog& error_log, Pauli correction_type) {
  if (error_log.size() != graph.num_edges()) {
    throw ContractViolation("error log size does not match the graph");
  }
  CorrResult out;
  out.correction = Correction(graph.num_edges());
  std::vector<std::uint8_t> hold(graph.num_internal_vertices(), 0);
  std::vector<VertexId> held;
  for (const ClusterTraversal& ct : clusters) {
    const auto entries = ct.stack.entries();
    for (auto it = entries.rbegin(); it != entries.rend(); ++it) {
      ++out.trace.corr;
      const Edge& ed = graph.edge(it->edge);
      const VertexId leaf = it->leaf_is_u ? ed.u : ed.v;
      const VertexId parent = it->leaf_is_u ? ed.v : ed.u;
      if (!(it->leaf_defect ^ (hold[leaf] != 0))) continue;
      out.correction.flip(it->edge);
      error_log.apply(it->edge, correction_type);
      if (!graph.is_virtual(parent)) {
        hold[parent] ^= 1;
        held.push_back(parent);
      }
    }
    for (VertexId v : held) hold[v] = 0;
    held.clear();
  }
  return out;
}

MicroarchDecoder::MicroarchDecoder(const DecodingGraph& graph, std::size_t stack_capacity)
    : graph_(&graph), grgen_(graph), stack_capacity_(stack_capacity), log_(graph.num_edges()) {}

PipelineResult MicroarchDecoder::decode(const Syndrome& syn, Pauli correction_type) {
  PipelineResult out;
  out.trace = grgen_.run(syn);
  DfsResult dfs = run_dfs(grgen_, syn, stack_capacity_);
  out.trace += dfs.trace;
  out.overflow_events = dfs.overflow_events;
  CorrResult corr = run_corr(*graph_, dfs.clusters, log_, correction_type);
  out.trace += corr.trace;
  out.correction = std::move(corr.correction);
  out.clusters = grgen_.clusters();
  return out;
}

// ---------------------------------------------------------------------------
// Cost formulas

MemoryFootprint memory_footprint(int d, std::optional<double> stack_entries) {
  if (d < 3) throw ParameterError("distance must be >= 3");
  const double d3 = static_cast<double>(d) * d * d;
  const double lg = std::log2(static_cast<double>(d));
  MemoryFootprint m;
  m.stm_bits = 7 * d3;
  m.table_bits = 3 * d3 * lg;
  m.parity_bits = d3;
  m.zdr_bits = 3 * d3;
  if (stack_entries) {
    if (*stack_entries < 0) throw ParameterError("stack size must be non-negative");
    m.edge_stack_bits = 3 * *stack_entries * lg;
  } else {
    m.edge_stack_bits = 3 * d3 * lg;
  }
  return m;
}

std::size_t stm_exact_bits(const DecodingGraph& graph) {
  const std::size_t boundary = graph.num_boundary_edges();
  return graph.num_internal_vertices() + 2 * (graph.num_edges() - boundary) + boundary;
}

std::uint64_t grgen_read_estimate(std::span<const std::uint32_t> diameters) {
  std::uint64_t total = 0;
  for (std::uint64_t g : diameters) total += g * (g + 1) * (2 * g + 1) / 6;
  return total;
}

std::uint64_t stage_read_estimate(std::span<const std::uint32_t> cluster_sizes) {
  std::uint64_t total = 0;
  for (auto s : cluster_sizes) total += s;
  return total;
}

double reads_to_seconds(double reads, double clock_hz, double latency_cycles) {
  if (clock_hz <= 0) throw ParameterError("clock frequency must be positive");
  return reads * latency_cycles / clock_hz;
}

double mwpm_memory_bound(int d, double p) {
  if (d < 1) throw ParameterError("distance must be positive");
  if (p < 0) throw ParameterError("probability must be non-negative");
  constexpr double kBitsPerEdge = 161;
  const double edges = 3.0 * d * d * d;
  const double w = std::ceil(2 * p * edges);
  const double average = kBitsPerEdge * w * (w + 1) / 2;
  const double distance = kBitsPerEdge * (d - 1) * d / 2;
  return std::max(average, distance);
}

}  // namespace ufarch
