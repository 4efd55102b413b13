#include "spyswap/rng.hpp"

#include <numeric>
#include <utility>

#include "spyswap/error.hpp"
#include "spyswap/permutation.hpp"

namespace spyswap {

namespace {
constexpr std::uint64_t kGamma = 0x9e3779b97f4a7c15ULL;
}

std::uint64_t mix64(std::uint64_t x) noexcept {
  x ^= x >> 30;
  x *= 0xbf58476d1ce4e5b9ULL;
  x ^= x >> 27;
  x *= 0x94d049bb133111ebULL;
  x ^= x >> 31;
  return x;
}

CounterRng::result_type CounterRng::operator()() noexcept {
  ++counter_;
  return mix64(key_ + counter_ * kGamma);
}

std::uint64_t CounterRng::bounded(std::uint64_t bound) noexcept {
  unsigned __int128 m = static_cast<unsigned __int128>((*this)()) * bound;
  auto low = static_cast<std::uint64_t>(m);
  if (low < bound) {
    const std::uint64_t threshold = (0 - bound) % bound;
    while (low < threshold) {
      m = static_cast<unsigned __int128>((*this)()) * bound;
      low = static_cast<std::uint64_t>(m);
    }
  }
  return static_cast<std::uint64_t>(m >> 64);
}

double CounterRng::uniform01() noexcept {
  return static_cast<double>((*this)() >> 11) * 0x1.0p-53;
}

CounterRng substream(std::uint64_t seed, std::uint64_t index) noexcept {
  return CounterRng(mix64(seed ^ mix64(index + kGamma)));
}

Permutation random_permutation(std::size_t n, CounterRng& rng) {
  std::vector<std::uint32_t> v(n);
  std::iota(v.begin(), v.end(), 1U);
  for (std::size_t i = n; i > 1; --i) {
    const auto j = static_cast<std::size_t>(rng.bounded(i));
    std::swap(v[i - 1], v[j]);
  }
  return Permutation(std::move(v));
}

std::vector<std::uint32_t> sample_without_replacement(std::size_t n, std::size_t k,
                                                      CounterRng& rng) {
  if (k > n) throw InvalidInput("sample size exceeds population");
  std::vector<std::uint32_t> pool(n);
  std::iota(pool.begin(), pool.end(), 0U);
  for (std::size_t i = 0; i < k; ++i) {
    const auto j = i + static_cast<std::size_t>(rng.bounded(n - i));
    std::swap(pool[i], pool[j]);
  }
  pool.resize(k);
  return pool;
}

}  // namespace spyswap
