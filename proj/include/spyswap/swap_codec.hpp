#pragma once

#include <cstddef>
#include <cstdint>
#include <utility>
#include <vector>

#include "spyswap/permutation.hpp"

namespace spyswap {

// Message-in-a-swap codec over the first r drawers.
//   d = floor(r/3) triple-parity bits, a = largest with 2^a <= d/2,
//   m = 4^a messages packed as s1 * 2^a + s2.
struct CodecParams {
  std::size_t r = 0;
  std::size_t d = 0;
  unsigned a = 0;
  std::uint64_t m = 1;

  // Throws InvalidInput when r < 6 (fewer than two triples).
  static CodecParams for_prefix(std::size_t r);

  std::size_t half() const noexcept { return std::size_t{1} << a; }
};

using BitVector = std::vector<std::uint8_t>;
using MessageIndex = std::uint64_t;

// Bit i is the parity of the pattern of triple (p(3i+1), p(3i+2), p(3i+3)).
BitVector g0_triples(const Permutation& prefix_pattern);

// Position swap between triples i0 and i1 (0-based, distinct) that flips both
// of their parity bits. Tries the 9 cross pairs in lexicographic order.
Transposition find_swap_flipping_pair(const Permutation& prefix_pattern, std::size_t i0,
                                      std::size_t i1);

// XOR-of-indices syndrome of each half, packed as s1 * 2^a + s2.
MessageIndex g1_syndrome(const BitVector& v, const CodecParams& params);

// Global bit indices (first half, second half) whose flip makes g1 == target.
std::pair<std::size_t, std::size_t> find_bits_to_flip(const BitVector& v, MessageIndex target,
                                                      const CodecParams& params);

// A position swap within 1..r after which decode_message yields target.
Transposition encode_message(const Permutation& prefix_pattern, MessageIndex target,
                             const CodecParams& params);

MessageIndex decode_message(const Permutation& prefix_pattern, const CodecParams& params);

}  // namespace spyswap
