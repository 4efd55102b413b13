#include "spyswap/swap_codec.hpp"

#include <array>
#include <string>

#include "spyswap/error.hpp"

namespace spyswap {

namespace {

int triple_parity(Elem x, Elem y, Elem z) {
  return static_cast<int>((x > y) + (x > z) + (y > z)) & 1;
}

int triple_bit(std::span<const Elem> m, std::size_t i) {
  return triple_parity(m[3 * i], m[3 * i + 1], m[3 * i + 2]);
}

}  // namespace

CodecParams CodecParams::for_prefix(std::size_t r) {
  if (r < 6) throw InvalidInput("codec needs r >= 6, got " + std::to_string(r));
  CodecParams p;
  p.r = r;
  p.d = r / 3;
  // 2^a <= d/2  <=>  2^(a+1) <= d
  while ((std::size_t{2} << (p.a + 1)) <= p.d) ++p.a;
  p.m = std::uint64_t{1} << (2 * p.a);
  return p;
}

BitVector g0_triples(const Permutation& prefix_pattern) {
  const std::size_t d = prefix_pattern.size() / 3;
  if (d == 0) throw InvalidInput("g0_triples: prefix shorter than one triple");
  BitVector bits(d);
  for (std::size_t i = 0; i < d; ++i) {
    bits[i] = static_cast<std::uint8_t>(triple_bit(prefix_pattern.mapping(), i));
  }
  return bits;
}

Transposition find_swap_flipping_pair(const Permutation& prefix_pattern, std::size_t i0,
                                      std::size_t i1) {
  const std::size_t d = prefix_pattern.size() / 3;
  if (i0 == i1 || i0 >= d || i1 >= d) {
    throw InvalidInput("find_swap_flipping_pair: need distinct triples below " +
                       std::to_string(d));
  }
  const auto m = prefix_pattern.mapping();
  const int b0 = triple_bit(m, i0);
  const int b1 = triple_bit(m, i1);
  for (std::size_t x = 0; x < 3; ++x) {
    for (std::size_t y = 0; y < 3; ++y) {
      std::array<Elem, 3> t0{m[3 * i0], m[3 * i0 + 1], m[3 * i0 + 2]};
      std::array<Elem, 3> t1{m[3 * i1], m[3 * i1 + 1], m[3 * i1 + 2]};
      std::swap(t0[x], t1[y]);
      if (triple_parity(t0[0], t0[1], t0[2]) != b0 && triple_parity(t1[0], t1[1], t1[2]) != b1) {
        return Transposition(static_cast<Elem>(3 * i0 + x + 1), static_cast<Elem>(3 * i1 + y + 1));
      }
    }
  }
  throw InvariantViolation("no cross-triple swap flips both parities for triples " +
                           std::to_string(i0) + "," + std::to_string(i1));
}

MessageIndex g1_syndrome(const BitVector& v, const CodecParams& params) {
  if (v.size() != params.d) throw DimensionError("g1_syndrome: bit vector length != d");
  const std::size_t h = params.half();
  MessageIndex s1 = 0;
  MessageIndex s2 = 0;
  for (std::size_t i = 0; i < h; ++i) {
    if (v[i]) s1 ^= i;
    if (v[h + i]) s2 ^= i;
  }
  return (s1 << params.a) | s2;
}

std::pair<std::size_t, std::size_t> find_bits_to_flip(const BitVector& v, MessageIndex target,
                                                      const CodecParams& params) {
  if (target >= params.m) {
    throw InvalidInput("message " + std::to_string(target) + " >= m=" + std::to_string(params.m));
  }
  const MessageIndex current = g1_syndrome(v, params);
  const MessageIndex low_mask = params.half() - 1;
  const MessageIndex delta = current ^ target;
  const auto local0 = static_cast<std::size_t>(delta >> params.a);
  const auto local1 = static_cast<std::size_t>(delta & low_mask);
  return {local0, params.half() + local1};
}

Transposition encode_message(const Permutation& prefix_pattern, MessageIndex target,
                             const CodecParams& params) {
  if (prefix_pattern.size() != params.r) {
    throw DimensionError("encode_message: prefix size != r");
  }
  const auto [i0, i1] = find_bits_to_flip(g0_triples(prefix_pattern), target, params);
  return find_swap_flipping_pair(prefix_pattern, i0, i1);
}

MessageIndex decode_message(const Permutation& prefix_pattern, const CodecParams& params) {
  if (prefix_pattern.size() != params.r) {
    throw DimensionError("decode_message: prefix size != r");
  }
  return g1_syndrome(g0_triples(prefix_pattern), params);
}

}  // namespace spyswap
