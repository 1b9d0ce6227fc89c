#pragma once

#include <cstdint>

#include "ufarch/lattice.hpp"

namespace ufarch {

struct NoiseParams {
  double p = 0.0;                ///< per-edge fault probability, in [0, 0.5)
  std::uint64_t seed = 0;
  std::uint64_t trial_index = 0;

  void validate() const;
};

/// Edge-indexed fault set.
using ErrorPattern = BitSet;
/// Internal-vertex-indexed defect set; virtual vertices carry no bit.
using Syndrome = BitSet;

/// Phenomenological noise: each edge fails independently with probability p.
/// Edge e of trial t is decided by the counter-based word (seed, t, e) alone.
ErrorPattern sample_error(const DecodingGraph& graph, const NoiseParams& noise);

Syndrome syndrome_of(const DecodingGraph& graph, const ErrorPattern& err);

/// Heuristic logical error rate 0.15 * (40 p)^((d+1)/2) for the union-find
/// decoder under phenomenological noise. Meaningful for p well below 1e-2.
double logical_error_rate(int d, double p);

/// 3 d^3 p, the usual approximation of the mean number of faults per cycle.
double expected_fault_count(int d, double p);

/// |E| p using the exact edge count of the constructed graph.
double expected_fault_count_exact(const DecodingGraph& graph, double p);

}  // namespace ufarch
