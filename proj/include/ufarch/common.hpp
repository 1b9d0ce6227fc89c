#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

#include <boost/dynamic_bitset.hpp>

namespace ufarch {

using VertexId = std::uint32_t;
using EdgeId = std::uint32_t;

/// Bit set indexed by edge or vertex id.
using BitSet = boost::dynamic_bitset<std::uint64_t>;

inline constexpr VertexId kNoVertex = 0xffffffffu;

/// Invalid user-supplied parameter (bad distance, probability, geometry...).
class ParameterError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Caller broke a documented precondition of an operation.
class ContractViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// An internal invariant failed; indicates a bug in the decoder model.
class InvariantViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// A compressed frame could not be decoded.
class MalformedFrame : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

template <typename Fn>
void for_each_set_bit(const BitSet& bits, Fn&& fn) {
  for (auto i = bits.find_first(); i != BitSet::npos; i = bits.find_next(i)) {
    fn(static_cast<std::uint32_t>(i));
  }
}

}  // namespace ufarch
