#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "ufarch/blocksim.hpp"
#include "ufarch/codec.hpp"
#include "ufarch/experiments.hpp"
#include "ufarch/lattice.hpp"
#include "ufarch/noise.hpp"
#include "ufarch/parallel.hpp"
#include "ufarch/uf_core.hpp"

using json = nlohmann::ordered_json;
using namespace ufarch;

namespace {

struct CliConfig {
  int d = 11;
  std::vector<int> d_list;
  int d_max = 30;
  double p = 1e-3;
  std::vector<double> p_list;
  double trials = 1e4;
  std::uint64_t seed = 1;
  std::string shape = "4,2,1,1";
  std::string scheme = "all";
  std::string framing = "round";
  std::string timing = "estimate";
  bool shared_tables = false;
  int stack = 0;
  int logical = 1000;
  double bin_ns = 10;
  std::string out;
  std::string format = "csv";
  unsigned workers = 0;
  std::string action;
};

std::uint64_t trial_count(double t) {
  if (!(t >= 1) || t != std::floor(t) || t > 1e15) {
    throw ParameterError("trials must be a positive integer");
  }
  return static_cast<std::uint64_t>(t);
}

GrGenTiming parse_timing(const std::string& s) {
  if (s == "estimate") return GrGenTiming::Estimate;
  if (s == "trace") return GrGenTiming::Trace;
  throw ParameterError("unknown timing '" + s + "'");
}

class Runner {
 public:
  Runner(const CliConfig& cfg, std::string command) : cfg_(cfg), command_(std::move(command)) {}

  ExperimentSpec spec(const std::string& tag, std::vector<int> d_list,
                      std::vector<double> p_list) const {
    ExperimentSpec s;
    s.name = command_ + (tag.empty() ? "" : ":" + tag);
    s.d_list = std::move(d_list);
    s.p_list = std::move(p_list);
    s.trials = trial_count(cfg_.trials);
    s.seed = cfg_.seed;
    s.out = cfg_.out;
    s.workers = cfg_.workers;
    return s;
  }

  void manifest(const ExperimentSpec& s) const {
    json m;
    m["tool"] = "ufarch";
    m["version"] = UFARCH_VERSION;
    m["command"] = s.name;
    m["seed"] = s.seed;
    m["spec_hash"] = s.hash();
    std::cerr << m.dump() << std::endl;
  }

  // Writes to <out>/<name>.<ext>, or to stdout when no directory is set.
  void emit(const std::string& name, const std::string& ext, const std::string& body) const {
    if (cfg_.out.empty()) {
      std::cout << body;
      return;
    }
    std::filesystem::create_directories(cfg_.out);
    const auto path = std::filesystem::path(cfg_.out) / (name + "." + ext);
    std::ofstream os(path, std::ios::binary);
    if (!os) throw ParameterError("cannot write " + path.string());
    os << body;
  }

  void emit_json(const std::string& name, const json& j) const { emit(name, "json", j.dump(2) + "\n"); }

  template <typename T>
  void emit_csv(const std::string& name, const T& rows, const std::string& hash) const {
    std::ostringstream os;
    write_csv(os, rows, hash);
    emit(name, "csv", os.str());
  }

  bool json_format() const {
    if (cfg_.format == "json") return true;
    if (cfg_.format == "csv") return false;
    throw ParameterError("format must be csv or json");
  }

  std::vector<int> d_list(std::vector<int> fallback) const {
    return cfg_.d_list.empty() ? fallback : cfg_.d_list;
  }
  std::vector<double> p_list() const {
    return cfg_.p_list.empty() ? std::vector<double>{cfg_.p} : cfg_.p_list;
  }

  void lattice() const;
  void noise() const;
  void decode() const;
  void mem_table() const;
  void mwpm_compare() const;
  void block_sim() const;
  void size_stack_cmd() const;
  void compress_bench() const;
  void experiment() const;

 private:
  BlockConfig block_config() const {
    BlockConfig b;
    b.shape = BlockShape::parse(cfg_.shape);
    b.d = cfg_.d;
    b.stack_capacity = static_cast<std::uint32_t>(std::max(cfg_.stack, 0));
    b.shared_tables = cfg_.shared_tables;
    b.grgen_timing = parse_timing(cfg_.timing);
    b.validate();
    return b;
  }

  json block_summary(const BlockExec& b) const {
    json j;
    j["trials"] = b.makespan.size();
    j["streams"] = b.streams;
    j["timeout_failures"] = b.timeout_failures;
    j["overflow_failures"] = b.overflow_failures;
    j["mean_s"] = b.mean;
    j["max_s"] = b.max;
    j["cutoff_s"] = b.cutoff;
    j["above_cutoff"] = b.above_cutoff;
    j["tail_slope_per_ns"] = b.tail.slope;
    j["tail_r2"] = b.tail.r2;
    j["extrapolated_cutoff_s"] = b.extrapolated_cutoff;
    return j;
  }

  std::vector<CompressionRow> filter_scheme(std::vector<CompressionRow> rows) const {
    if (cfg_.scheme == "all") return rows;
    const std::string name = cfg_.scheme == "best" ? "best" : to_string(parse_scheme(cfg_.scheme));
    std::vector<CompressionRow> kept;
    for (auto& r : rows) {
      if (r.scheme == name) kept.push_back(std::move(r));
    }
    return kept;
  }

  const CliConfig& cfg_;
  std::string command_;
};

void Runner::lattice() const {
  const ExperimentSpec s = spec("", {cfg_.d}, {0.0});
  manifest(s);
  if (!cfg_.action.empty() && cfg_.action != "dump" && cfg_.action != "info") {
    throw ParameterError("lattice action must be dump or info");
  }
  const DecodingGraph g(LatticeParams::for_distance(cfg_.d));
  json j;
  j["d"] = cfg_.d;
  j["vertices"] = g.num_vertices();
  j["edges"] = g.num_edges();
  j["space_edges"] = g.num_space_edges();
  j["time_edges"] = g.num_time_edges();
  j["boundary_edges"] = g.num_boundary_edges();
  if (cfg_.action == "info") {
    emit_json("lattice", j);
    return;
  }
  json vs = json::array();
  for (VertexId v = 0; v < g.num_vertices(); ++v) {
    json o;
    o["id"] = v;
    if (g.is_virtual(v)) {
      o["kind"] = v == g.left() ? "left" : "right";
    } else {
      const VertexCoord c = g.coord(v);
      o["kind"] = "syndrome";
      o["layer"] = c.layer;
      o["row"] = c.row;
      o["col"] = c.col;
    }
    vs.push_back(std::move(o));
  }
  json es = json::array();
  for (EdgeId e = 0; e < g.num_edges(); ++e) {
    const Edge& ed = g.edge(e);
    es.push_back({{"id", e},
                  {"u", ed.u},
                  {"v", ed.v},
                  {"kind", ed.kind == EdgeKind::Space ? "space" : "time"},
                  {"boundary", g.is_boundary_edge(e)}});
  }
  j["vertex_list"] = std::move(vs);
  j["edge_list"] = std::move(es);
  emit_json("lattice", j);
}

void Runner::noise() const {
  const ExperimentSpec s = spec("", {cfg_.d}, {cfg_.p});
  s.validate();
  manifest(s);
  const DecodingGraph g(LatticeParams::for_distance(cfg_.d));
  const Histogram h = parallel_trials<Histogram>(
      s.trials, cfg_.workers, [] { return 0; }, [] { return Histogram{}; },
      [&](int, Histogram& part, std::uint64_t t) {
        part.add(syndrome_of(g, sample_error(g, {cfg_.p, cfg_.seed, t})).count());
      },
      [](Histogram& a, const Histogram& b) { a.merge(b); });
  const std::string hash = s.hash();
  if (json_format()) {
    json counts = json::object();
    for (std::size_t w = 0; w < h.counts.size(); ++w) {
      if (h.counts[w]) counts[std::to_string(w)] = h.counts[w];
    }
    emit_json("noise", {{"spec_hash", hash}, {"d", cfg_.d}, {"p", cfg_.p}, {"trials", h.total},
                        {"weights", counts}});
    return;
  }
  std::ostringstream os;
  os << "spec_hash,weight,count\n";
  for (std::size_t w = 0; w < h.counts.size(); ++w) {
    if (h.counts[w]) os << hash << ',' << w << ',' << h.counts[w] << '\n';
  }
  emit("noise", "csv", os.str());
}

void Runner::decode() const {
  const ExperimentSpec s = spec("", {cfg_.d}, {cfg_.p});
  s.validate();
  manifest(s);
  const LogicalRate r = run_logical_error_rate(cfg_.d, cfg_.p, s.trials, s.seed, s.workers);
  if (cfg_.format == "csv" && !cfg_.out.empty()) {
    emit_csv("decode", std::vector<LogicalRate>{r}, s.hash());
    return;
  }
  emit_json("decode", {{"spec_hash", s.hash()},
                       {"d", r.d},
                       {"p", r.p},
                       {"trials", r.trials},
                       {"failures", r.failures},
                       {"logical_error_rate", r.rate},
                       {"ci_low", r.ci.low},
                       {"ci_high", r.ci.high},
                       {"predicted", r.predicted},
                       {"mean_clusters", r.mean_clusters}});
}

void Runner::mem_table() const {
  const ExperimentSpec s = spec("", d_list({5, 15, 25}), {0.0});
  manifest(s);
  const auto rows = memory_table(s.d_list);
  if (!json_format()) {
    emit_csv("mem_table", rows, s.hash());
    return;
  }
  json arr = json::array();
  for (const auto& r : rows) {
    arr.push_back({{"d", r.d}, {"component", r.component}, {"formula", r.formula},
                   {"bits", r.bits}, {"bytes", r.bytes()}, {"printed", format_bytes(r.bytes())}});
  }
  emit_json("mem_table", {{"spec_hash", s.hash()}, {"rows", arr}});
}

void Runner::mwpm_compare() const {
  std::vector<int> ds;
  for (int d = 3; d <= cfg_.d_max; d += 2) ds.push_back(d);
  if (ds.empty()) throw ParameterError("d-max must be >= 3");
  const ExperimentSpec s = spec("stack=" + std::to_string(cfg_.stack), ds, {cfg_.p});
  NoiseParams{cfg_.p, 0, 0}.validate();
  manifest(s);
  const auto rows = mwpm_comparison(ds, cfg_.p, cfg_.stack);
  if (!json_format()) {
    emit_csv("mwpm_compare", rows, s.hash());
    return;
  }
  json arr = json::array();
  for (const auto& r : rows) {
    arr.push_back({{"d", r.d}, {"uf_table_bits", r.uf_table_bits}, {"uf_full_bits", r.uf_full_bits},
                   {"uf_sized_bits", r.uf_sized_bits}, {"mwpm_bits", r.mwpm_bits}});
  }
  const auto cross = mwpm_crossover(rows);
  emit_json("mwpm_compare", {{"spec_hash", s.hash()},
                             {"p", cfg_.p},
                             {"crossover", cross ? json(*cross) : json(nullptr)},
                             {"rows", arr}});
}

void Runner::block_sim() const {
  const BlockConfig b = block_config();
  const std::string tag = b.shape.to_string() + ";" + cfg_.timing +
                          (b.shared_tables ? ";shared" : "") +
                          ";stack=" + std::to_string(b.stack_capacity);
  const ExperimentSpec s = spec(tag, {cfg_.d}, {cfg_.p});
  s.validate();
  manifest(s);
  const BlockExec r = run_block_exec_distribution(b, cfg_.p, s.trials, s.seed, s.workers);
  json summary{{"spec_hash", s.hash()}, {"shape", b.shape.to_string()}, {"d", cfg_.d},
               {"p", cfg_.p}};
  summary.update(block_summary(r));
  if (cfg_.out.empty() && json_format()) {
    emit_json("block_sim", summary);
    return;
  }
  std::ostringstream os;
  write_csv(os, r, cfg_.bin_ns * 1e-9, s.hash());
  emit("block_sim", "csv", os.str());
  if (!cfg_.out.empty()) emit_json("block_sim", summary);
}

void Runner::size_stack_cmd() const {
  const BlockShape shape = BlockShape::parse(cfg_.shape);
  shape.validate();
  const ExperimentSpec s = spec("L=" + std::to_string(cfg_.logical) + ";" + shape.to_string(),
                                {cfg_.d}, {cfg_.p});
  s.validate();
  manifest(s);
  const StackSizing st = size_stack(cfg_.d, cfg_.p, s.trials, s.seed, s.workers);
  const ResourceSummary rs =
      resource_savings(cfg_.logical, cfg_.d, st.entries, shape);
  if (!json_format()) {
    emit_csv("size_stack", rs, s.hash());
    return;
  }
  emit_json("size_stack",
            {{"spec_hash", s.hash()},
             {"d", cfg_.d},
             {"p", cfg_.p},
             {"trials", st.trials},
             {"stack_entries", st.entries},
             {"tail_probability", st.tail_probability},
             {"target", st.target},
             {"extrapolated", st.extrapolated},
             {"max_observed", st.max_observed},
             {"fit", {{"slope", st.fit.slope}, {"intercept", st.fit.intercept}, {"r2", st.fit.r2},
                      {"points", st.fit.points}}},
             {"resources", {{"logical_qubits", rs.logical_qubits},
                            {"blocks", rs.blocks},
                            {"baseline_bytes", rs.baseline_total()},
                            {"optimized_bytes", rs.total()},
                            {"reduction", rs.reduction()}}}});
}

void Runner::compress_bench() const {
  const Framing framing = parse_framing(cfg_.framing);
  const ExperimentSpec s = spec(cfg_.scheme + ";" + to_string(framing), d_list({cfg_.d}), p_list());
  s.validate();
  manifest(s);
  if (cfg_.scheme != "all" && cfg_.scheme != "best") parse_scheme(cfg_.scheme);
  const auto rows =
      filter_scheme(run_compression_sweep(s.d_list, s.p_list, s.trials, s.seed, framing, {}, s.workers));
  if (!json_format()) {
    emit_csv("compress_bench", rows, s.hash());
    return;
  }
  json arr = json::array();
  for (const auto& r : rows) {
    arr.push_back({{"d", r.d}, {"p", r.p}, {"framing", to_string(r.framing)}, {"scheme", r.scheme},
                   {"frames", r.frames}, {"mean_ratio", r.mean_ratio},
                   {"mean_nominal_ratio", r.mean_nominal_ratio}, {"mean_wire_bits", r.mean_wire_bits}});
  }
  emit_json("compress_bench", {{"spec_hash", s.hash()}, {"rows", arr}});
}

void Runner::experiment() const {
  const std::string& name = cfg_.action;
  if (name == "logical-rate") {
    const ExperimentSpec s = spec(name, d_list({3, 5}), p_list());
    s.validate();
    manifest(s);
    std::vector<LogicalRate> rows;
    for (int d : s.d_list) {
      for (double p : s.p_list) rows.push_back(run_logical_error_rate(d, p, s.trials, s.seed, s.workers));
    }
    emit_csv("logical_rate", rows, s.hash());
  } else if (name == "cluster-sizes") {
    const ExperimentSpec s = spec(name, {cfg_.d}, {cfg_.p});
    s.validate();
    manifest(s);
    emit_csv("cluster_sizes", run_cluster_size_distribution(cfg_.d, cfg_.p, s.trials, s.seed, s.workers),
             s.hash());
  } else if (name == "runtime-correlation") {
    const ExperimentSpec s = spec(name + ";" + cfg_.timing, {cfg_.d}, {cfg_.p});
    s.validate();
    manifest(s);
    emit_csv("runtime_correlation",
             run_runtime_correlation(cfg_.d, cfg_.p, s.trials, s.seed, parse_timing(cfg_.timing),
                                     s.workers),
             s.hash());
  } else if (name == "block-exec") {
    const BlockConfig b = block_config();
    const ExperimentSpec s = spec(name + ";" + b.shape.to_string() + ";" + cfg_.timing, {cfg_.d},
                                  {cfg_.p});
    s.validate();
    manifest(s);
    const BlockExec r = run_block_exec_distribution(b, cfg_.p, s.trials, s.seed, s.workers);
    std::ostringstream os;
    write_csv(os, r, cfg_.bin_ns * 1e-9, s.hash());
    emit("block_exec", "csv", os.str());
  } else if (name == "compression") {
    const Framing framing = parse_framing(cfg_.framing);
    const ExperimentSpec s = spec(name + ";" + to_string(framing), d_list({3, 5, 7, 9, 11, 15, 21}),
                                  p_list());
    s.validate();
    manifest(s);
    emit_csv("compression",
             run_compression_sweep(s.d_list, s.p_list, s.trials, s.seed, framing, {}, s.workers),
             s.hash());
  } else if (name == "memory") {
    const ExperimentSpec s = spec(name, d_list({5, 15, 25}), {0.0});
    manifest(s);
    emit_csv("memory", memory_table(s.d_list), s.hash());
  } else if (name == "resources") {
    const BlockShape shape = BlockShape::parse(cfg_.shape);
    shape.validate();
    const ExperimentSpec s = spec(name + ";" + shape.to_string() + ";L=" + std::to_string(cfg_.logical),
                                  {cfg_.d}, {cfg_.p});
    s.validate();
    manifest(s);
    const double entries = cfg_.stack > 0
                               ? cfg_.stack
                               : size_stack(cfg_.d, cfg_.p, s.trials, s.seed, s.workers).entries;
    emit_csv("resources", resource_savings(cfg_.logical, cfg_.d, entries, shape), s.hash());
  } else {
    throw ParameterError(
        "experiment must be one of logical-rate, cluster-sizes, runtime-correlation, "
        "block-exec, compression, memory, resources");
  }
}

void add_common(CLI::App& app, CliConfig& c) {
  app.add_option("--d", c.d, "Code distance (odd, >= 3)");
  app.add_option("--d-list", c.d_list, "Comma-separated distances")->delimiter(',');
  app.add_option("--d-max", c.d_max, "Largest distance for sweeps");
  app.add_option("--p", c.p, "Per-edge fault probability");
  app.add_option("--p-list", c.p_list, "Comma-separated fault probabilities")->delimiter(',');
  app.add_option("--trials", c.trials, "Monte Carlo trials");
  app.add_option("--seed", c.seed, "Random seed");
  app.add_option("--shape", c.shape, "Block shape streams,grgen,dfs,corr");
  app.add_option("--scheme", c.scheme, "Codec: sparse, dzc, geo, best or all");
  app.add_option("--framing", c.framing, "Compression frame: round or cycle");
  app.add_option("--timing", c.timing, "Gr-Gen timing: estimate or trace");
  app.add_flag("--shared-tables", c.shared_tables, "Share root and size tables within a block");
  app.add_option("--stack", c.stack, "Edge stack capacity in entries (0 = unbounded)");
  app.add_option("--logical", c.logical, "Logical qubits for resource totals");
  app.add_option("--bin-ns", c.bin_ns, "Histogram bin width in ns");
  app.add_option("--out", c.out, "Output directory (default: stdout)")->envname("UFARCH_OUT_DIR");
  app.add_option("--format", c.format, "Output format: csv or json");
  app.add_option("--workers", c.workers, "Worker threads (0 = all cores)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Union-Find decoder architecture models and experiments", "ufarch"};
  app.set_version_flag("--version", std::string(UFARCH_VERSION));
  app.set_config("--config", "", "Flat key = value file mirroring the flags");
  app.allow_config_extras(false);
  app.require_subcommand(1);

  CliConfig cfg;
  add_common(app, cfg);

  struct Command {
    const char* name;
    const char* help;
    void (Runner::*run)() const;
    bool action;
  };
  const Command commands[] = {
      {"lattice", "Describe or dump the decoding graph", &Runner::lattice, true},
      {"noise", "Syndrome weight histogram", &Runner::noise, true},
      {"decode", "Monte Carlo logical error rate", &Runner::decode, false},
      {"mem-table", "Per-decoder memory table", &Runner::mem_table, false},
      {"mwpm-compare", "Union-Find vs matching memory sweep", &Runner::mwpm_compare, false},
      {"block-sim", "Decoder block completion times", &Runner::block_sim, false},
      {"size-stack", "Edge stack sizing and resource totals", &Runner::size_stack_cmd, false},
      {"compress-bench", "Syndrome compression ratios", &Runner::compress_bench, false},
      {"experiment", "Run a named experiment", &Runner::experiment, true},
  };
  for (const Command& c : commands) {
    CLI::App* sub = app.add_subcommand(c.name, c.help);
    sub->fallthrough();
    if (c.action) sub->add_option("action", cfg.action, "Action or experiment name");
  }

  if (argc < 2) {
    std::cerr << app.help();
    return 1;
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    std::cerr << app.help();
    return 1;
  }

  try {
    for (const Command& c : commands) {
      if (app.got_subcommand(c.name)) {
        const Runner runner(cfg, c.name);
        (runner.*c.run)();
      }
    }
  } catch (const ParameterError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const MalformedFrame& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const ContractViolation& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return 2;
  } catch (const InvariantViolation& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
