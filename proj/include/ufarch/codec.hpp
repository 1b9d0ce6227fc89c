#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ufarch/common.hpp"
#include "ufarch/lattice.hpp"

namespace ufarch {

enum class Scheme { Sparse, Dzc, Geo };

std::string to_string(Scheme s);
Scheme parse_scheme(const std::string& name);

/// Layout of a syndrome bit vector: `layers` grids of rows x cols, row-major.
struct Geometry {
  std::uint32_t rows = 0;
  std::uint32_t cols = 0;
  std::uint32_t layers = 1;

  std::size_t size() const { return std::size_t{rows} * cols * layers; }
  bool operator==(const Geometry&) const = default;
};

/// One round of a distance-d decoding graph, or all d rounds.
Geometry round_geometry(int d);
Geometry cycle_geometry(int d);

struct CompressedFrame {
  Scheme scheme = Scheme::Sparse;
  BitSet payload;                 ///< bits in transmission order
  std::size_t raw_bits = 0;       ///< length of the uncompressed vector
  std::uint32_t block_size = 0;   ///< m for dzc and geo
  Geometry geometry;              ///< geo only
  std::size_t nominal_bits = 0;     ///< 1 + w*ceil(log2 l) for sparse, wire bits otherwise

  std::size_t wire_bits() const { return payload.size(); }
};

/// ceil(log2(n)) for n >= 1.
std::uint32_t ceil_log2(std::uint64_t n);

/// Flag bit, then a weight field and the ascending set-bit indices.
CompressedFrame encode_sparse(const BitSet& x);
BitSet decode_sparse(const CompressedFrame& f);

/// One indicator bit per m-bit block, then the contents of nonzero blocks.
CompressedFrame encode_dzc(const BitSet& x, std::uint32_t block_size = 3);
BitSet decode_dzc(const CompressedFrame& f);

/// DZC over tile_rows x tile_cols tiles of each layer.
CompressedFrame encode_geo(const BitSet& x, Geometry g, std::uint32_t tile_rows = 2,
                           std::uint32_t tile_cols = 2);
BitSet decode_geo(const CompressedFrame& f, std::uint32_t tile_rows = 2,
                  std::uint32_t tile_cols = 2);

BitSet decode(const CompressedFrame& f);

double compression_ratio(std::size_t raw_bits, std::size_t compressed_bits);

struct CodecConfig {
  bool sparse = true;
  bool dzc = true;
  bool geo = true;
  std::uint32_t dzc_block = 3;
  std::uint32_t tile_rows = 2;
  std::uint32_t tile_cols = 2;
};

struct SchemeChoice {
  Scheme scheme = Scheme::Sparse;
  double ratio = 0;
  std::size_t wire_bits = 0;
};

/// Best wire ratio among the enabled schemes; ties prefer sparse, then geo.
SchemeChoice best_scheme(const BitSet& x, Geometry g, const CodecConfig& cfg = {});

}  // namespace ufarch
