#include "ufarch/experiments.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <sstream>

#include "ufarch/noise.hpp"
#include "ufarch/parallel.hpp"
#include "ufarch/uf_core.hpp"

namespace ufarch {

namespace {

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

DecodingGraph graph_for(int d) { return build_decoding_graph(LatticeParams::for_distance(d)); }

}  // namespace

void ExperimentSpec::validate() const {
  if (trials < 1) throw ParameterError("trials must be >= 1");
  if (d_list.empty() || p_list.empty()) throw ParameterError("empty distance or rate list");
  for (int d : d_list) LatticeParams::for_distance(d).validate();
  for (double p : p_list) NoiseParams{p, seed, 0}.validate();
}

std::string ExperimentSpec::hash() const {
  std::ostringstream key;
  key << name << '|';
  for (int d : d_list) key << d << ',';
  key << '|';
  char buf[32];
  for (double p : p_list) {
    std::snprintf(buf, sizeof buf, "%.17g,", p);
    key << buf;
  }
  key << '|' << trials << '|' << seed;
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : key.str()) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

Interval wilson_interval(std::uint64_t k, std::uint64_t n, double z) {
  if (n == 0) return {0, 1};
  const double nn = static_cast<double>(n);
  const double ph = k / nn;
  const double z2 = z * z;
  const double denom = 1 + z2 / nn;
  const double centre = (ph + z2 / (2 * nn)) / denom;
  const double half = z * std::sqrt(ph * (1 - ph) / nn + z2 / (4 * nn * nn)) / denom;
  return {std::max(0.0, centre - half), std::min(1.0, centre + half)};
}

LogicalRate run_logical_error_rate(int d, double p, std::uint64_t trials, std::uint64_t seed,
                                   unsigned workers) {
  NoiseParams{p, seed, 0}.validate();
  const DecodingGraph graph = graph_for(d);
  LogicalRate out;
  out.d = d;
  out.p = p;
  out.trials = trials;
  out.predicted = logical_error_rate(d, p);
  struct Tally {
    std::uint64_t failures = 0;
    std::uint64_t clusters = 0;
  };
  const Tally tally = parallel_trials<Tally>(
      trials, workers, [&] { return UnionFindDecoder(graph); }, [] { return Tally{}; },
      [&](UnionFindDecoder& dec, Tally& acc, std::uint64_t t) {
        const ErrorPattern err = sample_error(graph, {p, seed, t});
        if (err.none()) return;
        const DecodeResult r = dec.decode(syndrome_of(graph, err));
        acc.clusters += r.stats.num_clusters();
        if (!assess(graph, err, r.correction).success) ++acc.failures;
      },
      [](Tally& a, const Tally& b) {
        a.failures += b.failures;
        a.clusters += b.clusters;
      });
  out.failures = tally.failures;
  out.mean_clusters = trials ? static_cast<double>(tally.clusters) / trials : 0;
  out.rate = trials ? static_cast<double>(out.failures) / trials : 0;
  out.ci = wilson_interval(out.failures, trials);
  return out;
}

void Histogram::add(std::size_t value, std::uint64_t n) {
  if (counts.size() <= value) counts.resize(value + 1, 0);
  counts[value] += n;
  total += n;
}

void Histogram::merge(const Histogram& other) {
  if (counts.size() < other.counts.size()) counts.resize(other.counts.size(), 0);
  for (std::size_t i = 0; i < other.counts.size(); ++i) counts[i] += other.counts[i];
  total += other.total;
}

std::uint64_t Histogram::above(std::size_t value) const {
  std::uint64_t n = 0;
  for (std::size_t i = value + 1; i < counts.size(); ++i) n += counts[i];
  return n;
}

std::size_t Histogram::mode() const {
  return static_cast<std::size_t>(std::max_element(counts.begin(), counts.end()) - counts.begin());
}

void Histogram::fit_tail(std::size_t lo, std::size_t hi) {
  std::vector<double> xs, ys;
  for (std::size_t s = lo; s <= hi; ++s) {
    const std::uint64_t a = above(s);
    if (a == 0) break;
    xs.push_back(static_cast<double>(s));
    ys.push_back(static_cast<double>(a) / total);
  }
  tail = fit_log_linear(xs, ys);
}

Histogram run_cluster_size_distribution(int d, double p, std::uint64_t trials,
                                        std::uint64_t seed, unsigned workers) {
  NoiseParams{p, seed, 0}.validate();
  const DecodingGraph graph = graph_for(d);
  Histogram h = parallel_trials<Histogram>(
      trials, workers, [&] { return UnionFindDecoder(graph); }, [] { return Histogram{}; },
      [&](UnionFindDecoder& dec, Histogram& part, std::uint64_t t) {
        const ErrorPattern err = sample_error(graph, {p, seed, t});
        if (err.none()) return;
        ClusterSet& cs = dec.grow(syndrome_of(graph, err));
        for (VertexId r : cs.roots()) part.add(cs.size(r));
      },
      [](Histogram& a, const Histogram& b) { a.merge(b); });
  if (h.total > 0) h.fit_tail(5, 40);
  return h;
}

RuntimeCorrelation run_runtime_correlation(int d, double p, std::uint64_t trials,
                                           std::uint64_t seed, GrGenTiming timing,
                                           unsigned workers) {
  NoiseParams{p, seed, 0}.validate();
  const DecodingGraph graph = graph_for(d);
  using Points = std::vector<std::pair<double, double>>;
  RuntimeCorrelation out;
  out.points = parallel_trials<Points>(
      trials, workers, [&] { return WorkloadSampler(graph); }, [] { return Points{}; },
      [&](WorkloadSampler& ws, Points& part, std::uint64_t t) {
        const StreamWorkload w = ws.sample(p, seed, t, timing);
        part.emplace_back(reads_to_seconds(static_cast<double>(w.grgen_reads)),
                          reads_to_seconds(static_cast<double>(stage_read_estimate(w.cluster_sizes))));
      },
      [](Points& a, const Points& b) { a.insert(a.end(), b.begin(), b.end()); });

  const double n = static_cast<double>(out.points.size());
  if (n == 0) return out;
  double sx = 0, sy = 0;
  for (auto [x, y] : out.points) {
    sx += x;
    sy += y;
  }
  out.mean_grgen = sx / n;
  out.mean_dfs = sy / n;
  out.ratio_of_means = out.mean_dfs > 0 ? out.mean_grgen / out.mean_dfs : 0;
  double vx = 0, vy = 0, cxy = 0;
  for (auto [x, y] : out.points) {
    vx += (x - out.mean_grgen) * (x - out.mean_grgen);
    vy += (y - out.mean_dfs) * (y - out.mean_dfs);
    cxy += (x - out.mean_grgen) * (y - out.mean_dfs);
  }
  out.pearson = vx > 0 && vy > 0 ? cxy / std::sqrt(vx * vy) : 0;
  return out;
}

BlockExec run_block_exec_distribution(const BlockConfig& cfg, double p, std::uint64_t trials,
                                      std::uint64_t seed, unsigned workers) {
  cfg.validate();
  NoiseParams{p, seed, 0}.validate();
  const DecodingGraph graph = graph_for(cfg.d);
  const auto streams = static_cast<std::uint64_t>(cfg.shape.streams);

  struct Partial {
    std::vector<double> makespan;
    std::uint64_t timeouts = 0;
    std::uint64_t overflows = 0;
  };
  struct Scratch {
    WorkloadSampler sampler;
    std::vector<StreamWorkload> work;
  };
  Partial all = parallel_trials<Partial>(
      trials, workers, [&] { return Scratch{WorkloadSampler(graph), {}}; },
      [] { return Partial{}; },
      [&](Scratch& sc, Partial& part, std::uint64_t t) {
        sc.work.clear();
        for (std::uint64_t s = 0; s < streams; ++s) {
          sc.work.push_back(sc.sampler.sample(p, seed, t * streams + s, cfg.grgen_timing));
        }
        const BlockResult r = simulate_block(cfg, sc.work);
        part.makespan.push_back(r.makespan);
        part.timeouts += r.timeout_failures;
        part.overflows += r.overflow_failures;
      },
      [](Partial& a, const Partial& b) {
        a.makespan.insert(a.makespan.end(), b.makespan.begin(), b.makespan.end());
        a.timeouts += b.timeouts;
        a.overflows += b.overflows;
      });

  BlockExec out;
  out.makespan = std::move(all.makespan);
  out.timeout_failures = all.timeouts;
  out.overflow_failures = all.overflows;
  out.streams = streams * trials;
  if (out.makespan.empty()) return out;
  double sum = 0;
  Histogram ns;
  for (double m : out.makespan) {
    sum += m;
    out.max = std::max(out.max, m);
    if (m > out.cutoff) ++out.above_cutoff;
    ns.add(static_cast<std::size_t>(std::ceil(m * 1e9 - 1e-6)));
  }
  out.mean = sum / out.makespan.size();

  std::vector<double> xs, ys;
  for (std::size_t s = 0; s < ns.counts.size(); ++s) {
    const std::uint64_t a = ns.above(s);
    if (a < 5) break;
    const double frac = static_cast<double>(a) / ns.total;
    if (frac <= 0.05) {
      xs.push_back(static_cast<double>(s));
      ys.push_back(frac);
    }
  }
  out.tail = fit_log_linear(xs, ys);
  if (out.tail.points >= 3 && out.tail.slope < 0) {
    const double target = (streams / 2.0) * logical_error_rate(cfg.d, p);
    out.extrapolated_cutoff = (std::log(target) - out.tail.intercept) / out.tail.slope * 1e-9;
  }
  return out;
}

std::string to_string(Framing f) { return f == Framing::Round ? "round" : "cycle"; }

Framing parse_framing(const std::string& name) {
  if (name == "round") return Framing::Round;
  if (name == "cycle") return Framing::Cycle;
  throw ParameterError("unknown framing '" + name + "'");
}

std::vector<CompressionRow> run_compression_sweep(const std::vector<int>& d_list,
                                                  const std::vector<double>& p_list,
                                                  std::uint64_t trials, std::uint64_t seed,
                                                  Framing framing, const CodecConfig& cfg,
                                                  unsigned workers) {
  struct Acc {
    double ratio = 0, nominal = 0, bits = 0;
    std::uint64_t frames = 0;
  };
  // sparse, dzc, geo, best
  using Partial = std::array<Acc, 4>;
  std::vector<CompressionRow> rows;
  for (int d : d_list) {
    const DecodingGraph graph = graph_for(d);
    const Geometry g = framing == Framing::Round ? round_geometry(d) : cycle_geometry(d);
    const std::size_t len = g.size();
    for (double p : p_list) {
      NoiseParams{p, seed, 0}.validate();
      Partial total = parallel_trials<Partial>(
          trials, workers, [] { return 0; }, [] { return Partial{}; },
          [&](int, Partial& part, std::uint64_t t) {
            const Syndrome syn = syndrome_of(graph, sample_error(graph, {p, seed, t}));
            BitSet frame(len);
            for (std::size_t off = 0; off < syn.size(); off += len) {
              for (std::size_t i = 0; i < len; ++i) frame[i] = syn[off + i];
              auto note = [&](Acc& a, std::size_t wire, std::size_t nominal) {
                a.ratio += compression_ratio(len, wire);
                a.nominal += compression_ratio(len, nominal);
                a.bits += static_cast<double>(wire);
                ++a.frames;
              };
              const CompressedFrame fs = encode_sparse(frame);
              const CompressedFrame fd = encode_dzc(frame, cfg.dzc_block);
              const CompressedFrame fg = encode_geo(frame, g, cfg.tile_rows, cfg.tile_cols);
              note(part[0], fs.wire_bits(), fs.nominal_bits);
              note(part[1], fd.wire_bits(), fd.nominal_bits);
              note(part[2], fg.wire_bits(), fg.nominal_bits);
              const SchemeChoice best = best_scheme(frame, g, cfg);
              const std::size_t nominal = best.scheme == Scheme::Sparse ? fs.nominal_bits
                                        : best.scheme == Scheme::Geo  ? fg.nominal_bits
                                                                      : fd.nominal_bits;
              note(part[3], best.wire_bits, nominal);
            }
          },
          [](Partial& a, const Partial& b) {
            for (int i = 0; i < 4; ++i) {
              a[i].ratio += b[i].ratio;
              a[i].nominal += b[i].nominal;
              a[i].bits += b[i].bits;
              a[i].frames += b[i].frames;
            }
          });
      const char* names[] = {"sparse", "dzc", "geo", "best"};
      const bool enabled[] = {cfg.sparse, cfg.dzc, cfg.geo, true};
      for (int i = 0; i < 4; ++i) {
        if (!enabled[i]) continue;
        const Acc& a = total[i];
        const double n = a.frames ? static_cast<double>(a.frames) : 1;
        rows.push_back({d, p, framing, names[i], a.ratio / n, a.nominal / n, a.bits / n, a.frames});
      }
    }
  }
  return rows;
}

std::vector<MemoryRow> memory_table(const std::vector<int>& d_list) {
  std::vector<MemoryRow> rows;
  for (int d : d_list) {
    const MemoryFootprint m = memory_footprint(d);
    rows.push_back({d, "stm", "7d^3", m.stm_bits});
    rows.push_back({d, "table", "3d^3 log2 d", m.table_bits});
    rows.push_back({d, "parity", "d^3", m.parity_bits});
    rows.push_back({d, "zdr", "3d^3", m.zdr_bits});
    rows.push_back({d, "edge_stack", "3d^3 log2 d", m.edge_stack_bits});
  }
  return rows;
}

std::vector<MwpmRow> mwpm_comparison(const std::vector<int>& d_list, double p,
                                     double stack_entries) {
  std::vector<MwpmRow> rows;
  for (int d : d_list) {
    const MemoryFootprint worst = memory_footprint(d);
    const MemoryFootprint sized = memory_footprint(d, stack_entries);
    MwpmRow r;
    r.d = d;
    r.uf_table_bits = worst.stm_bits + worst.table_bits + worst.parity_bits + worst.zdr_bits +
                      worst.edge_stack_bits;
    r.uf_full_bits = worst.total_bits();
    r.uf_sized_bits = sized.total_bits();
    r.mwpm_bits = mwpm_memory_bound(d, p);
    rows.push_back(r);
  }
  return rows;
}

std::optional<int> mwpm_crossover(const std::vector<MwpmRow>& rows, double MwpmRow::*uf) {
  std::optional<int> cross;
  int changes = 0;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const bool below = rows[i].*uf < rows[i].mwpm_bits;
    const bool prev = i > 0 && rows[i - 1].*uf < rows[i - 1].mwpm_bits;
    if (i == 0) {
      if (below) cross = rows[i].d;
      continue;
    }
    if (below != prev) {
      ++changes;
      if (below) cross = rows[i].d;
    }
  }
  if (changes > 1 || rows.empty() || !(rows.back().*uf < rows.back().mwpm_bits)) {
    return std::nullopt;
  }
  return cross;
}

std::string format_bytes(double bytes) {
  char buf[32];
  if (bytes >= 1e6) {
    std::snprintf(buf, sizeof buf, "%.2f MB", bytes / 1e6);
  } else if (bytes >= 1e3) {
    std::snprintf(buf, sizeof buf, "%.2f KB", bytes / 1e3);
  } else {
    std::snprintf(buf, sizeof buf, "%.0f B", bytes);
  }
  return buf;
}

void write_csv(std::ostream& os, const std::vector<LogicalRate>& rows, const std::string& hash) {
  os << "spec_hash,d,p,trials,failures,rate,ci_low,ci_high,predicted,mean_clusters\n";
  for (const auto& r : rows) {
    os << hash << ',' << r.d << ',' << fmt(r.p) << ',' << r.trials << ',' << r.failures << ','
       << fmt(r.rate) << ',' << fmt(r.ci.low) << ',' << fmt(r.ci.high) << ',' << fmt(r.predicted)
       << ',' << fmt(r.mean_clusters) << '\n';
  }
}

void write_csv(std::ostream& os, const Histogram& h, const std::string& hash) {
  os << "spec_hash,size,count,survival\n";
  for (std::size_t s = 0; s < h.counts.size(); ++s) {
    if (h.counts[s] == 0) continue;
    os << hash << ',' << s << ',' << h.counts[s] << ','
       << fmt(h.total ? static_cast<double>(h.above(s)) / h.total : 0) << '\n';
  }
}

void write_csv(std::ostream& os, const RuntimeCorrelation& r, const std::string& hash) {
  os << "spec_hash,trial,tau_grgen_s,tau_dfs_s\n";
  for (std::size_t i = 0; i < r.points.size(); ++i) {
    os << hash << ',' << i << ',' << fmt(r.points[i].first) << ',' << fmt(r.points[i].second)
       << '\n';
  }
}

void write_csv(std::ostream& os, const BlockExec& b, double bin_seconds, const std::string& hash) {
  os << "spec_hash,bin_start_s,bin_end_s,count\n";
  if (bin_seconds <= 0) throw ParameterError("bin width must be positive");
  std::vector<std::uint64_t> bins;
  for (double m : b.makespan) {
    const auto i = static_cast<std::size_t>(m / bin_seconds);
    if (bins.size() <= i) bins.resize(i + 1, 0);
    ++bins[i];
  }
  for (std::size_t i = 0; i < bins.size(); ++i) {
    os << hash << ',' << fmt(i * bin_seconds) << ',' << fmt((i + 1) * bin_seconds) << ','
       << bins[i] << '\n';
  }
}

void write_csv(std::ostream& os, const std::vector<CompressionRow>& rows, const std::string& hash) {
  os << "spec_hash,d,p,framing,scheme,frames,mean_ratio,mean_nominal_ratio,mean_wire_bits\n";
  for (const auto& r : rows) {
    os << hash << ',' << r.d << ',' << fmt(r.p) << ',' << to_string(r.framing) << ',' << r.scheme
       << ',' << r.frames << ',' << fmt(r.mean_ratio) << ',' << fmt(r.mean_nominal_ratio) << ','
       << fmt(r.mean_wire_bits) << '\n';
  }
}

void write_csv(std::ostream& os, const std::vector<MemoryRow>& rows, const std::string& hash) {
  os << "spec_hash,d,component,formula,bits,bytes,printed\n";
  for (const auto& r : rows) {
    os << hash << ',' << r.d << ',' << r.component << ',' << r.formula << ',' << fmt(r.bits)
       << ',' << fmt(r.bytes()) << ',' << format_bytes(r.bytes()) << '\n';
  }
}

void write_csv(std::ostream& os, const std::vector<MwpmRow>& rows, const std::string& hash) {
  os << "spec_hash,d,uf_table_bits,uf_full_bits,uf_sized_bits,mwpm_bits\n";
  for (const auto& r : rows) {
    os << hash << ',' << r.d << ',' << fmt(r.uf_table_bits) << ',' << fmt(r.uf_full_bits) << ','
       << fmt(r.uf_sized_bits) << ',' << fmt(r.mwpm_bits) << '\n';
  }
}

void write_csv(std::ostream& os, const ResourceSummary& r, const std::string& hash) {
  os << "spec_hash,component,baseline,optimized,reduction\n";
  auto line = [&](const char* name, double base, double opt) {
    os << hash << ',' << name << ',' << fmt(base) << ',' << fmt(opt) << ','
       << fmt(opt > 0 ? base / opt : 0) << '\n';
  };
  line("grgen_units", r.baseline_grgen, r.grgen);
  line("dfs_engines", r.baseline_dfs, r.dfs);
  line("corr_engines", r.baseline_corr, r.corr);
  line("stm_bytes", r.baseline_stm, r.stm);
  line("root_table_bytes", r.baseline_root, r.root);
  line("size_table_bytes", r.baseline_size, r.size);
  line("stack_bytes", r.baseline_stacks, r.stacks);
  line("total_bytes", r.baseline_total(), r.total());
}

}  // namespace ufarch
