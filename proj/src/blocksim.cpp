#include "ufarch/blocksim.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>

#include "ufarch/noise.hpp"
#include "ufarch/parallel.hpp"

namespace ufarch {

BlockShape BlockShape::parse(const std::string& text) {
  BlockShape s;
  int* fields[] = {&s.streams, &s.grgen, &s.dfs, &s.corr};
  std::istringstream in(text);
  std::string tok;
  int n = 0;
  while (std::getline(in, tok, ',')) {
    if (n == 4) throw ParameterError("block shape has more than four fields: " + text);
    std::size_t used = 0;
    try {
      *fields[n] = std::stoi(tok, &used);
    } catch (const std::exception&) {
      throw ParameterError("bad block shape field '" + tok + "'");
    }
    if (used != tok.size()) throw ParameterError("bad block shape field '" + tok + "'");
    ++n;
  }
  if (n != 4) throw ParameterError("block shape needs four fields: " + text);
  s.validate();
  return s;
}

std::string BlockShape::to_string() const {
  return std::to_string(streams) + "," + std::to_string(grgen) + "," + std::to_string(dfs) +
         "," + std::to_string(corr);
}

void BlockShape::validate() const {
  if (streams < 1 || grgen < 1 || dfs < 1 || corr < 1) {
    throw ParameterError("block shape counts must be positive");
  }
  if (dfs > grgen) throw ParameterError("more DFS engines than Gr-Gen units");
  if (corr > grgen) throw ParameterError("more Corr engines than Gr-Gen units");
}

void BlockConfig::validate() const {
  shape.validate();
  if (d < 3 || d % 2 == 0) throw ParameterError("distance must be odd and >= 3");
  if (clock_hz <= 0) throw ParameterError("clock frequency must be positive");
  if (latency_cycles <= 0) throw ParameterError("latency must be positive");
  if (t_round <= 0) throw ParameterError("round time must be positive");
  if (timeout_seconds() <= 0) throw ParameterError("timeout must be positive");
}

std::vector<double> BlockResult::utilization(const std::vector<double>& busy) const {
  std::vector<double> out(busy.size(), 0.0);
  if (makespan <= 0) return out;
  for (std::size_t i = 0; i < busy.size(); ++i) out[i] = busy[i] / makespan;
  return out;
}

namespace {

constexpr double kEps = 1e-9;

// Gr-Gen finish time of each stream, in read units. Units serve their
// streams in index order. With shared tables the active units split one
// growth port evenly.
std::vector<double> grgen_finish(const BlockConfig& cfg, std::span<const StreamWorkload> w,
                                 std::vector<double>& busy) {
  const int units = cfg.shape.grgen;
  const std::size_t n = w.size();
  std::vector<double> finish(n, 0.0);
  busy.assign(units, 0.0);
  std::vector<std::vector<std::size_t>> queue(units);
  for (std::size_t s = 0; s < n; ++s) queue[s % units].push_back(s);

  if (!cfg.shared_tables) {
    for (int u = 0; u < units; ++u) {
      double t = 0;
      for (std::size_t s : queue[u]) {
        t += static_cast<double>(w[s].grgen_reads);
        finish[s] = t;
        busy[u] += static_cast<double>(w[s].grgen_reads);
      }
    }
    return finish;
  }

  std::vector<std::size_t> pos(units, 0);
  std::vector<double> left(units, 0.0);
  auto load = [&](int u) {
    while (pos[u] < queue[u].size()) {
      const std::size_t s = queue[u][pos[u]];
      left[u] = static_cast<double>(w[s].grgen_reads);
      busy[u] += left[u];
      if (left[u] > 0) return;
      finish[s] = 0;  // idle stream finishes when it is reached
      ++pos[u];
    }
  };
  for (int u = 0; u < units; ++u) load(u);
  double now = 0;
  while (true) {
    int active = 0;
    double step = 0;
    for (int u = 0; u < units; ++u) {
      if (pos[u] < queue[u].size()) {
        ++active;
        step = active == 1 ? left[u] : std::min(step, left[u]);
      }
    }
    if (active == 0) break;
    now += step * active;
    for (int u = 0; u < units; ++u) {
      if (pos[u] >= queue[u].size()) continue;
      left[u] -= step;
      if (left[u] <= kEps) {
        finish[queue[u][pos[u]]] = now;
        ++pos[u];
        // Streams with no work complete immediately after their predecessor.
        while (pos[u] < queue[u].size() && w[queue[u][pos[u]]].grgen_reads == 0) {
          finish[queue[u][pos[u]]] = now;
          ++pos[u];
        }
        if (pos[u] < queue[u].size()) {
          left[u] = static_cast<double>(w[queue[u][pos[u]]].grgen_reads);
          busy[u] += left[u];
        }
      }
    }
  }
  return finish;
}

struct Job {
  std::size_t stream;
  std::size_t cluster;
};

// Earliest free server; the lower id wins ties.
std::size_t take(const std::vector<double>& free_at) {
  return static_cast<std::size_t>(std::min_element(free_at.begin(), free_at.end()) -
                                  free_at.begin());
}

// Order in which a block with one DFS engine and one Corr engine starts its
// traversals: whenever the engine and a stack are free it takes the stream
// that has been ready longest, ties round robin.
std::vector<Job> service_order(std::span<const StreamWorkload> w,
                               const std::vector<double>& ready_at) {
  const std::size_t n = w.size();
  std::vector<Job> order;
  std::vector<std::size_t> next(n, 0);
  std::vector<double> released = ready_at;
  std::size_t remaining = 0;
  for (const auto& s : w) remaining += s.cluster_sizes.size();
  double engine = 0, corr = 0;
  std::array<double, 2> stacks{0, 0};
  std::size_t rr = 0;
  while (remaining > 0) {
    const std::size_t k = stacks[0] <= stacks[1] ? 0 : 1;
    double now = std::max(engine, stacks[k]);
    double earliest = 0;
    bool any = false;
    for (std::size_t s = 0; s < n; ++s) {
      if (next[s] >= w[s].cluster_sizes.size()) continue;
      earliest = any ? std::min(earliest, released[s]) : released[s];
      any = true;
    }
    now = std::max(now, earliest);
    std::size_t pick = n;
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t s = (rr + i) % n;
      if (next[s] >= w[s].cluster_sizes.size() || released[s] > now + kEps) continue;
      if (pick == n || released[s] < released[pick] - kEps) pick = s;
    }
    rr = (pick + 1) % n;
    const double size = w[pick].cluster_sizes[next[pick]];
    order.push_back({pick, next[pick]});
    ++next[pick];
    --remaining;
    engine = now + size;
    released[pick] = engine;
    corr = std::max(engine, corr) + size;
    stacks[k] = corr;
  }
  return order;
}

}  // namespace

BlockResult simulate_block(const BlockConfig& cfg, std::span<const StreamWorkload> workloads) {
  cfg.validate();
  const std::size_t n = workloads.size();
  const double scale = cfg.seconds(1.0);

  BlockResult res;
  res.completion.assign(n, 0.0);
  res.dfs_busy.assign(cfg.shape.dfs, 0.0);
  res.corr_busy.assign(cfg.shape.corr, 0.0);
  for (const StreamWorkload& w : workloads) {
    if (w.tree_edges.size() != w.cluster_sizes.size()) {
      throw ContractViolation("workload cluster lists differ in length");
    }
  }
  std::vector<double> gg_busy;
  const std::vector<double> ready_at = grgen_finish(cfg, workloads, gg_busy);
  // The order is fixed before the engine counts come into play, so adding
  // engines can only move each start earlier.
  const std::vector<Job> jobs = service_order(workloads, ready_at);

  // Each job takes the earliest free DFS engine and edge stack, then the
  // earliest free Corr engine. A stack stays held until its correction ends.
  std::vector<double> dfs_free(cfg.shape.dfs, 0.0);
  std::vector<double> stack_free(2 * static_cast<std::size_t>(cfg.shape.dfs), 0.0);
  std::vector<double> corr_free(cfg.shape.corr, 0.0);
  std::vector<double> released = ready_at;
  std::vector<double> done = ready_at;
  std::vector<char> overflow(n, 0);
  for (const Job& job : jobs) {
    const StreamWorkload& w = workloads[job.stream];
    const double size = w.cluster_sizes[job.cluster];
    if (cfg.stack_capacity > 0 && w.tree_edges[job.cluster] > cfg.stack_capacity) {
      overflow[job.stream] = 1;
    }
    const std::size_t e = take(dfs_free), k = take(stack_free);
    const double start = std::max({released[job.stream], dfs_free[e], stack_free[k]});
    const double dfs_end = start + size;
    dfs_free[e] = dfs_end;
    res.dfs_busy[e] += size;
    released[job.stream] = dfs_end;

    const std::size_t u = take(corr_free);
    const double corr_end = std::max(dfs_end, corr_free[u]) + size;
    corr_free[u] = corr_end;
    res.corr_busy[u] += size;
    stack_free[k] = corr_end;
    done[job.stream] = std::max(done[job.stream], corr_end);
  }

  for (std::size_t s = 0; s < n; ++s) {
    res.completion[s] = done[s] * scale;
    res.makespan = std::max(res.makespan, res.completion[s]);
    if (res.completion[s] > cfg.timeout_seconds()) ++res.timeout_failures;
    if (overflow[s]) ++res.overflow_failures;
  }
  res.grgen_busy.resize(gg_busy.size());
  for (std::size_t u = 0; u < gg_busy.size(); ++u) res.grgen_busy[u] = gg_busy[u] * scale;
  for (double& b : res.dfs_busy) b *= scale;
  for (double& b : res.corr_busy) b *= scale;
  return res;
}

WorkloadSampler::WorkloadSampler(const DecodingGraph& graph)
    : graph_(&graph), decoder_(graph), grgen_(graph, false) {}

StreamWorkload WorkloadSampler::sample(double p, std::uint64_t seed, std::uint64_t stream_index,
                                       GrGenTiming timing) {
  const ErrorPattern err = sample_error(*graph_, {p, seed, stream_index});
  return from_syndrome(syndrome_of(*graph_, err), timing);
}

StreamWorkload WorkloadSampler::from_syndrome(const Syndrome& syn, GrGenTiming timing) {
  StreamWorkload w;
  ClusterSet& cs = decoder_.grow(syn);
  const DecodeStats stats = collect_stats(cs, decoder_.last_passes());
  for (const ClusterStats& c : stats.clusters) {
    w.cluster_sizes.push_back(c.num_vertices);
    w.tree_edges.push_back(c.num_vertices - (c.touches_boundary ? 0 : 1));
  }
  if (timing == GrGenTiming::Estimate) {
    const auto diam = cluster_diameters(*graph_, cs, stats.clusters);
    w.grgen_reads = grgen_read_estimate(diam);
  } else {
    w.grgen_reads = grgen_.run(syn).grgen;
  }
  return w;
}

bool check_block_constraint(double p_tof, int d, double p, int n_logical) {
  if (n_logical < 1) throw ParameterError("block must hold at least one logical qubit");
  if (p_tof < 0 || p_tof > 1) throw ParameterError("timeout probability must lie in [0, 1]");
  return p_tof / n_logical <= logical_error_rate(d, p);
}

TailFit fit_log_linear(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size()) throw ContractViolation("fit inputs differ in length");
  double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
  std::size_t n = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (ys[i] <= 0) continue;
    const double x = xs[i], y = std::log(ys[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    syy += y * y;
    ++n;
  }
  TailFit fit;
  fit.points = n;
  if (n < 2) return fit;
  const double vx = sxx - sx * sx / n;
  const double vy = syy - sy * sy / n;
  const double cxy = sxy - sx * sy / n;
  if (vx <= 0) return fit;
  fit.slope = cxy / vx;
  fit.intercept = (sy - fit.slope * sx) / n;
  fit.r2 = vy > 0 ? cxy * cxy / (vx * vy) : 1.0;
  return fit;
}

StackSizing size_stack(int d, double p, std::uint64_t trials, std::uint64_t seed,
                       unsigned workers) {
  NoiseParams{p, seed, 0}.validate();
  const DecodingGraph graph = build_decoding_graph(LatticeParams::for_distance(d));
  StackSizing out;
  out.target = logical_error_rate(d, p);
  out.trials = trials;
  if (p == 0) return out;
  if (trials < 100000) throw ParameterError("stack sizing needs at least 1e5 trials");

  // counts[s] = number of trials whose largest spanning tree has s edges.
  using Counts = std::vector<std::uint64_t>;
  Counts counts = parallel_trials<Counts>(
      trials, workers, [&] { return UnionFindDecoder(graph); }, [] { return Counts{}; },
      [&](UnionFindDecoder& dec, Counts& part, std::uint64_t t) {
        const ErrorPattern err = sample_error(graph, {p, seed, t});
        ClusterSet& cs = dec.grow(syndrome_of(graph, err));
        std::uint32_t worst = 0;
        for (VertexId r : cs.roots()) {
          worst = std::max(worst, cs.size(r) - (cs.touches_boundary(r) ? 0 : 1));
        }
        if (part.size() <= worst) part.resize(worst + 1, 0);
        ++part[worst];
      },
      [](Counts& acc, const Counts& part) {
        if (acc.size() < part.size()) acc.resize(part.size(), 0);
        for (std::size_t i = 0; i < part.size(); ++i) acc[i] += part[i];
      });

  out.max_observed = counts.empty() ? 0 : static_cast<std::uint32_t>(counts.size() - 1);
  // above[s] = trials with largest tree > s.
  std::vector<std::uint64_t> above(counts.size(), 0);
  std::uint64_t acc = 0;
  for (std::size_t s = counts.size(); s-- > 0;) {
    above[s] = acc;
    acc += counts[s];
  }
  const double n = static_cast<double>(trials);

  if (out.target * n >= 1.0) {
    for (std::size_t s = 0; s < above.size(); ++s) {
      if (above[s] / n <= out.target) {
        out.entries = static_cast<std::uint32_t>(s);
        out.tail_probability = above[s] / n;
        return out;
      }
    }
    out.entries = out.max_observed;
    return out;
  }

  std::vector<double> xs, ys;
  for (std::size_t s = 0; s < above.size(); ++s) {
    if (above[s] < 5) break;
    if (above[s] / n <= 0.05) {
      xs.push_back(static_cast<double>(s));
      ys.push_back(above[s] / n);
    }
  }
  if (xs.size() < 3) {
    throw ParameterError("too few tail points for extrapolation; raise the trial count");
  }
  out.fit = fit_log_linear(xs, ys);
  if (out.fit.slope >= 0) throw InvariantViolation("tail fit is not decreasing");
  out.extrapolated = true;
  const double s = (std::log(out.target) - out.fit.intercept) / out.fit.slope;
  out.entries = static_cast<std::uint32_t>(std::max(0.0, std::ceil(s)));
  out.entries = std::max(out.entries, out.max_observed);
  out.tail_probability = std::exp(out.fit.log_probability(out.entries));
  return out;
}

ResourceSummary resource_savings(int logical_qubits, int d, double stack_entries,
                                 BlockShape shape, bool shared_tables) {
  if (logical_qubits < 0) throw ParameterError("logical qubit count must be non-negative");
  if (stack_entries < 0) throw ParameterError("stack size must be non-negative");
  shape.validate();
  if (shape.streams % 2 != 0) throw ParameterError("a block carries both error types per qubit");
  ResourceSummary r;
  r.logical_qubits = logical_qubits;
  r.d = d;
  r.stack_entries = stack_entries;
  r.shape = shape;
  if (logical_qubits == 0) return r;

  const DecodingGraph graph = build_decoding_graph(LatticeParams::for_distance(d));
  const MemoryFootprint m = memory_footprint(d, stack_entries);
  const double stm = stm_exact_bits(graph) / 8.0;
  const double table = m.table_bits / 8.0;
  const double stacks = 2 * m.edge_stack_bits / 8.0;  // two stacks per DFS engine

  const int streams = 2 * logical_qubits;
  r.baseline_grgen = r.baseline_dfs = r.baseline_corr = streams;
  r.baseline_stm = streams * stm;
  r.baseline_root = r.baseline_size = streams * table;
  r.baseline_stacks = streams * stacks;

  const int qubits_per_block = shape.streams / 2;
  r.blocks = (logical_qubits + qubits_per_block - 1) / qubits_per_block;
  r.grgen = r.blocks * shape.grgen;
  r.dfs = r.blocks * shape.dfs;
  r.corr = r.blocks * shape.corr;
  const int tables = shared_tables ? r.blocks : r.grgen;
  r.stm = r.grgen * stm;
  r.root = r.size = tables * table;
  r.stacks = r.dfs * stacks;
  return r;
}

}  // namespace ufarch
