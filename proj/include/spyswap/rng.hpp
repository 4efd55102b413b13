#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace spyswap {

class Permutation;

// Counter-based generator: output i is a SplitMix64 finalization of
// key + i * golden_gamma. Independent streams come from distinct keys, so a
// trial's randomness depends only on (seed, trial index).
class CounterRng {
 public:
  using result_type = std::uint64_t;

  explicit CounterRng(std::uint64_t key) noexcept : key_(key) {}

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return ~result_type{0}; }

  result_type operator()() noexcept;

  // Uniform in [0, bound), bound > 0. Lemire's multiply-and-reject.
  std::uint64_t bounded(std::uint64_t bound) noexcept;

  // Uniform double in [0, 1).
  double uniform01() noexcept;

  std::uint64_t key() const noexcept { return key_; }
  std::uint64_t counter() const noexcept { return counter_; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

std::uint64_t mix64(std::uint64_t x) noexcept;

// Stream for item `index` under `seed`.
CounterRng substream(std::uint64_t seed, std::uint64_t index) noexcept;

// Fisher-Yates over 1..n.
Permutation random_permutation(std::size_t n, CounterRng& rng);

// k distinct values drawn from 0..n-1 (partial Fisher-Yates), in draw order.
std::vector<std::uint32_t> sample_without_replacement(std::size_t n, std::size_t k,
                                                      CounterRng& rng);

}  // namespace spyswap
