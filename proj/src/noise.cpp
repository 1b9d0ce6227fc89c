#include "ufarch/noise.hpp"

#include <cmath>
#include <string>

#include "ufarch/rng.hpp"

namespace ufarch {

void NoiseParams::validate() const {
  if (!(p >= 0.0 && p < 0.5)) {
    throw ParameterError("error probability must lie in [0, 0.5), got " + std::to_string(p));
  }
}

ErrorPattern sample_error(const DecodingGraph& graph, const NoiseParams& noise) {
  noise.validate();
  const std::size_t n = graph.num_edges();
  ErrorPattern err(n);
  const std::uint64_t threshold = rng::bernoulli_threshold(noise.p);
  if (threshold == 0) return err;
  const std::uint64_t key = rng::stream_key(noise.seed, noise.trial_index);
  for (std::size_t e = 0; e < n; ++e) {
    if (rng::word(key, e) < threshold) err.set(e);
  }
  return err;
}

Syndrome syndrome_of(const DecodingGraph& graph, const ErrorPattern& err) {
  if (err.size() != graph.num_edges()) {
    throw ContractViolation("error pattern size does not match the graph");
  }
  Syndrome syn(graph.num_internal_vertices());
  for_each_set_bit(err, [&](EdgeId e) {
    const Edge& ed = graph.edge(e);
    syn.flip(ed.u);
    if (!graph.is_virtual(ed.v)) syn.flip(ed.v);
  });
  return syn;
}

double logical_error_rate(int d, double p) {
  if (d < 1) throw ParameterError("distance must be positive");
  if (p < 0.0) throw ParameterError("probability must be non-negative");
  return 0.15 * std::pow(40.0 * p, (d + 1) / 2.0);
}

double expected_fault_count(int d, double p) {
  return 3.0 * d * d * d * p;
}

double expected_fault_count_exact(const DecodingGraph& graph, double p) {
  return static_cast<double>(graph.num_edges()) * p;
}

}  // namespace ufarch
