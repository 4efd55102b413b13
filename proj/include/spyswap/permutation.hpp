#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace spyswap {

using Elem = std::uint32_t;

// A bijection on {1..n} in one-line notation: mapping()[i-1] == p(i).
class Permutation {
 public:
  // Throws InvalidInput unless `mapping` is a bijection on 1..size (size >= 1).
  explicit Permutation(std::vector<Elem> mapping);

  static Permutation identity(std::size_t n);

  std::size_t size() const noexcept { return map_.size(); }

  // 1-based evaluation; x must be in 1..size().
  Elem operator()(Elem x) const noexcept { return map_[x - 1]; }

  std::span<const Elem> mapping() const noexcept { return map_; }

  bool is_identity() const noexcept;

  friend bool operator==(const Permutation&, const Permutation&) = default;

 private:
  struct Unchecked {};
  Permutation(std::vector<Elem> mapping, Unchecked) noexcept : map_(std::move(mapping)) {}

  friend Permutation compose(const Permutation&, const Permutation&);
  friend Permutation invert(const Permutation&);

  std::vector<Elem> map_;
};

// Unordered pair {a, b}, a != b, stored with a < b.
class Transposition {
 public:
  Transposition(Elem a, Elem b);

  Elem a() const noexcept { return a_; }
  Elem b() const noexcept { return b_; }

  // Image of x under the swap.
  Elem operator()(Elem x) const noexcept { return x == a_ ? b_ : (x == b_ ? a_ : x); }

  bool touches(Elem x) const noexcept { return x == a_ || x == b_; }

  Permutation as_permutation(std::size_t n) const;

  friend auto operator<=>(const Transposition&, const Transposition&) = default;

 private:
  Elem a_;
  Elem b_;
};

struct CycleDecomposition {
  // Each cycle starts at its smallest element and follows the permutation;
  // cycles are ordered by starting element.
  std::vector<std::vector<Elem>> cycles;
  std::size_t max_len = 0;

  std::vector<std::size_t> cycle_type() const;  // lengths, descending
};

enum class SwapSide { position, value };

// result(x) = outer(inner(x)).
Permutation compose(const Permutation& outer, const Permutation& inner);

Permutation invert(const Permutation& p);

// position: swaps the entries at positions a and b (p o t).
// value: swaps where the values a and b occur (t o p).
Permutation apply_transposition(const Permutation& p, const Transposition& t, SwapSide side);

CycleDecomposition cycle_decompose(const Permutation& p);

// Length of the longest cycle.
std::size_t longest_cycle(const Permutation& p);

// Length of the cycle through x.
std::size_t cycle_length_of(const Permutation& p, Elem x);

// Rank reduction: result(i) is the rank of values[i-1] among `values` (1 = smallest).
Permutation pattern(std::span<const std::int64_t> values);

// 0 for even, 1 for odd.
int parity(const Permutation& p);

// Text format: whitespace-separated 1-based integers, one permutation per line.
Permutation parse_permutation(const std::string& line);
std::vector<Permutation> read_permutations(std::istream& in);
std::string format_permutation(const Permutation& p);

}  // namespace spyswap
