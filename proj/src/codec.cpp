#include "ufarch/codec.hpp"

#include <array>

namespace ufarch {

std::string to_string(Scheme s) {
  switch (s) {
    case Scheme::Sparse: return "sparse";
    case Scheme::Dzc: return "dzc";
    case Scheme::Geo: return "geo";
  }
  return "?";
}

Scheme parse_scheme(const std::string& name) {
  if (name == "sparse") return Scheme::Sparse;
  if (name == "dzc") return Scheme::Dzc;
  if (name == "geo") return Scheme::Geo;
  throw ParameterError("unknown scheme '" + name + "'");
}

Geometry round_geometry(int d) {
  if (d < 3) throw ParameterError("distance must be >= 3");
  return {static_cast<std::uint32_t>(d), static_cast<std::uint32_t>(d - 1), 1};
}

Geometry cycle_geometry(int d) {
  Geometry g = round_geometry(d);
  g.layers = static_cast<std::uint32_t>(d);
  return g;
}

std::uint32_t ceil_log2(std::uint64_t n) {
  if (n == 0) throw ParameterError("log of zero");
  std::uint32_t k = 0;
  while ((std::uint64_t{1} << k) < n) ++k;
  return k;
}

namespace {

void put(BitSet& out, std::uint64_t value, std::uint32_t width) {
  for (std::uint32_t i = width; i-- > 0;) out.push_back(((value >> i) & 1) != 0);
}

struct Reader {
  const BitSet& bits;
  std::size_t pos = 0;

  std::uint64_t get(std::uint32_t width) {
    if (pos + width > bits.size()) throw MalformedFrame("frame is truncated");
    std::uint64_t v = 0;
    for (std::uint32_t i = 0; i < width; ++i) v = (v << 1) | (bits[pos++] ? 1 : 0);
    return v;
  }
  void finish() const {
    if (pos != bits.size()) throw MalformedFrame("trailing bits after frame");
  }
};

// Positions of each block's bits in the raw vector; kNoVertex marks padding.
using Blocks = std::vector<std::vector<std::uint32_t>>;

Blocks linear_blocks(std::size_t len, std::uint32_t m) {
  Blocks blocks((len + m - 1) / m);
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    for (std::uint32_t j = 0; j < m; ++j) {
      const std::size_t i = b * m + j;
      blocks[b].push_back(i < len ? static_cast<std::uint32_t>(i) : kNoVertex);
    }
  }
  return blocks;
}

Blocks tile_blocks(Geometry g, std::uint32_t tr, std::uint32_t tc) {
  Blocks blocks;
  const std::uint32_t nr = (g.rows + tr - 1) / tr, nc = (g.cols + tc - 1) / tc;
  for (std::uint32_t l = 0; l < g.layers; ++l) {
    for (std::uint32_t a = 0; a < nr; ++a) {
      for (std::uint32_t b = 0; b < nc; ++b) {
        auto& blk = blocks.emplace_back();
        for (std::uint32_t i = 0; i < tr; ++i) {
          for (std::uint32_t j = 0; j < tc; ++j) {
            const std::uint32_t r = a * tr + i, c = b * tc + j;
            blk.push_back(r < g.rows && c < g.cols ? (l * g.rows + r) * g.cols + c : kNoVertex);
          }
        }
      }
    }
  }
  return blocks;
}

BitSet encode_blocks(const BitSet& x, const Blocks& blocks) {
  BitSet out;
  std::vector<char> nonzero(blocks.size(), 0);
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    for (std::uint32_t i : blocks[b]) {
      if (i != kNoVertex && x[i]) nonzero[b] = 1;
    }
    out.push_back(nonzero[b] != 0);
  }
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    if (!nonzero[b]) continue;
    for (std::uint32_t i : blocks[b]) out.push_back(i != kNoVertex && x[i]);
  }
  return out;
}

BitSet decode_blocks(const BitSet& payload, std::size_t len, const Blocks& blocks) {
  Reader in{payload};
  std::vector<char> nonzero(blocks.size());
  for (auto& f : nonzero) f = static_cast<char>(in.get(1));
  BitSet x(len);
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    if (!nonzero[b]) continue;
    bool any = false;
    for (std::uint32_t i : blocks[b]) {
      const bool bit = in.get(1) != 0;
      if (!bit) continue;
      if (i == kNoVertex) throw MalformedFrame("padding bit is set");
      x.set(i);
      any = true;
    }
    if (!any) throw MalformedFrame("block marked nonzero carries no bits");
  }
  in.finish();
  return x;
}

}  // namespace

CompressedFrame encode_sparse(const BitSet& x) {
  const std::size_t len = x.size();
  if (len == 0) throw ParameterError("cannot compress an empty vector");
  CompressedFrame f;
  f.scheme = Scheme::Sparse;
  f.raw_bits = len;
  const std::size_t w = x.count();
  const std::uint32_t index_bits = ceil_log2(len);
  f.nominal_bits = 1 + w * index_bits;
  if (w == 0) {
    f.payload.push_back(false);
    return f;
  }
  f.payload.push_back(true);
  put(f.payload, w, ceil_log2(len + 1));
  for_each_set_bit(x, [&](std::size_t i) { put(f.payload, i, index_bits); });
  return f;
}

BitSet decode_sparse(const CompressedFrame& f) {
  const std::size_t len = f.raw_bits;
  if (len == 0) throw MalformedFrame("frame has zero raw length");
  Reader in{f.payload};
  BitSet x(len);
  if (in.get(1) == 0) {
    in.finish();
    return x;
  }
  const std::uint64_t w = in.get(ceil_log2(len + 1));
  if (w == 0) throw MalformedFrame("nonzero flag with zero weight");
  if (w > len) throw MalformedFrame("weight exceeds vector length");
  const std::uint32_t index_bits = ceil_log2(len);
  std::uint64_t prev = 0;
  for (std::uint64_t k = 0; k < w; ++k) {
    const std::uint64_t i = in.get(index_bits);
    if (i >= len) throw MalformedFrame("index out of range");
    if (k > 0 && i <= prev) throw MalformedFrame("indices are not ascending");
    x.set(i);
    prev = i;
  }
  in.finish();
  return x;
}

CompressedFrame encode_dzc(const BitSet& x, std::uint32_t block_size) {
  if (x.size() == 0) throw ParameterError("cannot compress an empty vector");
  if (block_size == 0) throw ParameterError("block size must be positive");
  CompressedFrame f;
  f.scheme = Scheme::Dzc;
  f.raw_bits = x.size();
  f.block_size = block_size;
  f.payload = encode_blocks(x, linear_blocks(x.size(), block_size));
  f.nominal_bits = f.wire_bits();
  return f;
}

BitSet decode_dzc(const CompressedFrame& f) {
  if (f.raw_bits == 0 || f.block_size == 0) throw MalformedFrame("frame header is invalid");
  return decode_blocks(f.payload, f.raw_bits, linear_blocks(f.raw_bits, f.block_size));
}

CompressedFrame encode_geo(const BitSet& x, Geometry g, std::uint32_t tile_rows,
                           std::uint32_t tile_cols) {
  if (g.size() != x.size() || x.size() == 0) {
    throw ParameterError("vector length " + std::to_string(x.size()) +
                         " does not match the geometry");
  }
  if (tile_rows == 0 || tile_cols == 0) throw ParameterError("tile size must be positive");
  CompressedFrame f;
  f.scheme = Scheme::Geo;
  f.raw_bits = x.size();
  f.block_size = tile_rows * tile_cols;
  f.geometry = g;
  f.payload = encode_blocks(x, tile_blocks(g, tile_rows, tile_cols));
  f.nominal_bits = f.wire_bits();
  return f;
}

BitSet decode_geo(const CompressedFrame& f, std::uint32_t tile_rows, std::uint32_t tile_cols) {
  if (f.geometry.size() != f.raw_bits || f.raw_bits == 0) {
    throw MalformedFrame("frame geometry does not match its length");
  }
  if (tile_rows * tile_cols != f.block_size) throw MalformedFrame("tile size mismatch");
  return decode_blocks(f.payload, f.raw_bits, tile_blocks(f.geometry, tile_rows, tile_cols));
}

BitSet decode(const CompressedFrame& f) {
  switch (f.scheme) {
    case Scheme::Sparse: return decode_sparse(f);
    case Scheme::Dzc: return decode_dzc(f);
    case Scheme::Geo: {
      // Square tiles are the only ones recoverable from the block size alone.
      std::uint32_t t = 1;
      while (t * t < f.block_size) ++t;
      if (t * t != f.block_size) throw MalformedFrame("non-square tile");
      return decode_geo(f, t, t);
    }
  }
  throw MalformedFrame("unknown scheme");
}

double compression_ratio(std::size_t raw_bits, std::size_t compressed_bits) {
  if (compressed_bits == 0) throw ParameterError("compressed length is zero");
  return static_cast<double>(raw_bits) / static_cast<double>(compressed_bits);
}

SchemeChoice best_scheme(const BitSet& x, Geometry g, const CodecConfig& cfg) {
  if (!cfg.sparse && !cfg.dzc && !cfg.geo) throw ParameterError("no scheme enabled");
  SchemeChoice best;
  bool have = false;
  auto consider = [&](Scheme s, std::size_t bits) {
    const double r = compression_ratio(x.size(), bits);
    if (!have || r > best.ratio) {
      best = {s, r, bits};
      have = true;
    }
  };
  // Evaluation order implements the tie preference.
  if (cfg.sparse) consider(Scheme::Sparse, encode_sparse(x).wire_bits());
  if (cfg.geo) consider(Scheme::Geo, encode_geo(x, g, cfg.tile_rows, cfg.tile_cols).wire_bits());
  if (cfg.dzc) consider(Scheme::Dzc, encode_dzc(x, cfg.dzc_block).wire_bits());
  return best;
}

}  // namespace ufarch
