#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cstdint>
#include <string>
#include <vector>

#include "ufarch/blocksim.hpp"
#include "ufarch/codec.hpp"
#include "ufarch/experiments.hpp"
#include "ufarch/lattice.hpp"
#include "ufarch/noise.hpp"
#include "ufarch/uf_core.hpp"

namespace py = pybind11;
using namespace ufarch;

namespace {

std::vector<std::uint32_t> to_indices(const BitSet& bits) {
  std::vector<std::uint32_t> out;
  for_each_set_bit(bits, [&](std::uint32_t i) { out.push_back(i); });
  return out;
}

BitSet from_indices(std::size_t n, const std::vector<std::uint32_t>& idx, const char* what) {
  BitSet bits(n);
  for (std::uint32_t i : idx) {
    if (i >= n) throw ParameterError(std::string(what) + " index out of range");
    bits.set(i);
  }
  return bits;
}

BitSet from_bools(const std::vector<bool>& v) {
  BitSet bits(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) bits[i] = v[i];
  return bits;
}

std::vector<bool> to_bools(const BitSet& bits) {
  std::vector<bool> v(bits.size());
  for (std::size_t i = 0; i < bits.size(); ++i) v[i] = bits[i];
  return v;
}

DecodingGraph graph(int d) { return DecodingGraph(LatticeParams::for_distance(d)); }

py::dict lattice_info(int d) {
  const DecodingGraph g = graph(d);
  py::dict out;
  out["d"] = d;
  out["vertices"] = g.num_vertices();
  out["edges"] = g.num_edges();
  out["space_edges"] = g.num_space_edges();
  out["time_edges"] = g.num_time_edges();
  out["boundary_edges"] = g.num_boundary_edges();
  py::list edges;
  for (const Edge& e : g.edges()) {
    edges.append(py::make_tuple(e.u, e.v, e.kind == EdgeKind::Space ? "space" : "time"));
  }
  out["edge_list"] = edges;
  return out;
}

std::vector<std::uint32_t> sample_error_py(int d, double p, std::uint64_t seed,
                                           std::uint64_t trial) {
  const DecodingGraph g = graph(d);
  return to_indices(sample_error(g, {p, seed, trial}));
}

std::vector<std::uint32_t> syndrome_py(int d, const std::vector<std::uint32_t>& edges) {
  const DecodingGraph g = graph(d);
  return to_indices(syndrome_of(g, from_indices(g.num_edges(), edges, "edge")));
}

py::dict decode_py(int d, const std::vector<std::uint32_t>& defects) {
  const DecodingGraph g = graph(d);
  UnionFindDecoder dec(g);
  const DecodeResult r = dec.decode(from_indices(g.num_internal_vertices(), defects, "vertex"));
  py::list clusters;
  for (const ClusterStats& c : r.stats.clusters) {
    py::dict cd;
    cd["root"] = c.root;
    cd["vertices"] = c.num_vertices;
    cd["growth_steps"] = c.growth_steps;
    cd["touches_boundary"] = c.touches_boundary;
    clusters.append(cd);
  }
  py::dict out;
  out["correction"] = to_indices(r.correction);
  out["passes"] = r.stats.passes;
  out["clusters"] = clusters;
  return out;
}

py::dict assess_py(int d, const std::vector<std::uint32_t>& error,
                   const std::vector<std::uint32_t>& correction) {
  const DecodingGraph g = graph(d);
  const DecodeOutcome o = assess(g, from_indices(g.num_edges(), error, "edge"),
                                 from_indices(g.num_edges(), correction, "edge"));
  py::dict out;
  out["success"] = o.success;
  out["residual_logical"] = o.residual_logical;
  return out;
}

py::dict logical_rate_py(int d, double p, std::uint64_t trials, std::uint64_t seed,
                         unsigned workers) {
  const LogicalRate r = run_logical_error_rate(d, p, trials, seed, workers);
  py::dict out;
  out["d"] = r.d;
  out["p"] = r.p;
  out["trials"] = r.trials;
  out["failures"] = r.failures;
  out["rate"] = r.rate;
  out["ci"] = py::make_tuple(r.ci.low, r.ci.high);
  out["predicted"] = r.predicted;
  out["mean_clusters"] = r.mean_clusters;
  return out;
}

py::list memory_table_py(const std::vector<int>& d_list) {
  py::list rows;
  for (const MemoryRow& r : memory_table(d_list)) {
    py::dict row;
    row["d"] = r.d;
    row["component"] = r.component;
    row["formula"] = r.formula;
    row["bits"] = r.bits;
    row["bytes"] = r.bytes();
    rows.append(row);
  }
  return rows;
}

py::dict mwpm_py(const std::vector<int>& d_list, double p, double stack_entries) {
  const auto rows = mwpm_comparison(d_list, p, stack_entries);
  py::list list;
  for (const MwpmRow& r : rows) {
    py::dict row;
    row["d"] = r.d;
    row["uf_table_bits"] = r.uf_table_bits;
    row["uf_full_bits"] = r.uf_full_bits;
    row["uf_sized_bits"] = r.uf_sized_bits;
    row["mwpm_bits"] = r.mwpm_bits;
    list.append(row);
  }
  py::dict out;
  out["rows"] = list;
  const auto cross = mwpm_crossover(rows);
  out["crossover"] = cross ? py::object(py::int_(*cross)) : py::object(py::none());
  return out;
}

py::dict size_stack_py(int d, double p, std::uint64_t trials, std::uint64_t seed,
                       unsigned workers) {
  const StackSizing s = size_stack(d, p, trials, seed, workers);
  py::dict out;
  out["entries"] = s.entries;
  out["tail_probability"] = s.tail_probability;
  out["target"] = s.target;
  out["extrapolated"] = s.extrapolated;
  out["max_observed"] = s.max_observed;
  out["r2"] = s.fit.r2;
  out["trials"] = s.trials;
  return out;
}

py::dict resources_py(int logical, int d, double stack_entries, const std::string& shape,
                      bool shared_tables) {
  const ResourceSummary r =
      resource_savings(logical, d, stack_entries, BlockShape::parse(shape), shared_tables);
  py::dict out;
  out["blocks"] = r.blocks;
  out["baseline_bytes"] = r.baseline_total();
  out["optimized_bytes"] = r.total();
  out["reduction"] = r.reduction();
  return out;
}

py::dict block_exec_py(int d, double p, std::uint64_t trials, std::uint64_t seed,
                       const std::string& shape, bool shared_tables, unsigned workers) {
  BlockConfig cfg;
  cfg.d = d;
  cfg.shape = BlockShape::parse(shape);
  cfg.shared_tables = shared_tables;
  const BlockExec b = run_block_exec_distribution(cfg, p, trials, seed, workers);
  py::dict out;
  out["makespan"] = b.makespan;
  out["mean"] = b.mean;
  out["max"] = b.max;
  out["above_cutoff"] = b.above_cutoff;
  out["timeout_failures"] = b.timeout_failures;
  out["overflow_failures"] = b.overflow_failures;
  return out;
}

CompressedFrame encode_py(const std::vector<bool>& bits, const std::string& scheme,
                          std::uint32_t rows, std::uint32_t cols) {
  const BitSet x = from_bools(bits);
  switch (parse_scheme(scheme)) {
    case Scheme::Sparse:
      return encode_sparse(x);
    case Scheme::Dzc:
      return encode_dzc(x);
    case Scheme::Geo: {
      if (rows == 0 || cols == 0 || x.size() % (std::size_t{rows} * cols) != 0) {
        throw ParameterError("geo needs rows and cols dividing the frame length");
      }
      const auto layers = static_cast<std::uint32_t>(x.size() / (std::size_t{rows} * cols));
      return encode_geo(x, Geometry{rows, cols, layers});
    }
  }
  throw ParameterError("unknown scheme");
}

py::list compression_sweep_py(const std::vector<int>& d_list, const std::vector<double>& p_list,
                              std::uint64_t trials, std::uint64_t seed, const std::string& framing,
                              unsigned workers) {
  py::list rows;
  for (const CompressionRow& r :
       run_compression_sweep(d_list, p_list, trials, seed, parse_framing(framing), {}, workers)) {
    py::dict row;
    row["d"] = r.d;
    row["p"] = r.p;
    row["scheme"] = r.scheme;
    row["mean_ratio"] = r.mean_ratio;
    row["frames"] = r.frames;
    rows.append(row);
  }
  return rows;
}

}  // namespace

PYBIND11_MODULE(_ufarch, m) {
  m.doc() = "Union-Find decoder architecture models";
  m.attr("__version__") = UFARCH_VERSION;

  py::register_exception<ParameterError>(m, "ParameterError", PyExc_ValueError);
  py::register_exception<MalformedFrame>(m, "MalformedFrame", PyExc_ValueError);
  py::register_exception<ContractViolation>(m, "ContractViolation", PyExc_RuntimeError);
  py::register_exception<InvariantViolation>(m, "InvariantViolation", PyExc_RuntimeError);

  m.def("lattice_info", &lattice_info, py::arg("d"));
  m.def("sample_error", &sample_error_py, py::arg("d"), py::arg("p"), py::arg("seed"),
        py::arg("trial") = 0);
  m.def("syndrome", &syndrome_py, py::arg("d"), py::arg("edges"));
  m.def("decode", &decode_py, py::arg("d"), py::arg("defects"));
  m.def("assess", &assess_py, py::arg("d"), py::arg("error"), py::arg("correction"));
  m.def("predicted_logical_rate", &logical_error_rate, py::arg("d"), py::arg("p"));
  m.def("logical_error_rate", &logical_rate_py, py::arg("d"), py::arg("p"), py::arg("trials"),
        py::arg("seed") = 1, py::arg("workers") = 0);
  m.def("memory_table", &memory_table_py, py::arg("d_list"));
  m.def("mwpm_comparison", &mwpm_py, py::arg("d_list"), py::arg("p"),
        py::arg("stack_entries") = 0.0);
  m.def("size_stack", &size_stack_py, py::arg("d"), py::arg("p"), py::arg("trials"),
        py::arg("seed") = 1, py::arg("workers") = 0);
  m.def("resource_savings", &resources_py, py::arg("logical_qubits"), py::arg("d"),
        py::arg("stack_entries"), py::arg("shape") = "4,2,1,1", py::arg("shared_tables") = true);
  m.def("block_exec", &block_exec_py, py::arg("d"), py::arg("p"), py::arg("trials"),
        py::arg("seed") = 1, py::arg("shape") = "4,2,1,1", py::arg("shared_tables") = false,
        py::arg("workers") = 0);
  m.def("compression_sweep", &compression_sweep_py, py::arg("d_list"), py::arg("p_list"),
        py::arg("trials"), py::arg("seed") = 1, py::arg("framing") = "round",
        py::arg("workers") = 0);

  py::class_<CompressedFrame>(m, "CompressedFrame")
      .def_property_readonly("scheme", [](const CompressedFrame& f) { return to_string(f.scheme); })
      .def_readonly("raw_bits", &CompressedFrame::raw_bits)
      .def_readonly("nominal_bits", &CompressedFrame::nominal_bits)
      .def_property_readonly("wire_bits", &CompressedFrame::wire_bits)
      .def_property_readonly("payload", [](const CompressedFrame& f) { return to_bools(f.payload); })
      .def_property_readonly("ratio", [](const CompressedFrame& f) {
        return compression_ratio(f.raw_bits, f.wire_bits());
      });
  m.def("encode", &encode_py, py::arg("bits"), py::arg("scheme") = "sparse", py::arg("rows") = 0,
        py::arg("cols") = 0);
  m.def("decode_frame", [](const CompressedFrame& f) { return to_bools(decode(f)); },
        py::arg("frame"));
}
