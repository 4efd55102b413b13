#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "spyswap/lps_expander.hpp"
#include "spyswap/permutation.hpp"

namespace spyswap {

struct BreakerParams {
  std::size_t n_elems = 0;
  double u = 1.0;
  std::size_t k = 0;        // ceil(n_elems / u)
  std::size_t arc_cap = 0;  // floor(n_elems / (4u))
  unsigned tau = 1;         // smallest with 2^tau >= 2u
  // degrees[0]: base graph; degrees[t]: level-t graph (t = 1..tau).
  // In strict mode these are minimum degrees p + 1 from the expansion constants.
  std::vector<std::uint64_t> degrees;
  GraphMode mode = GraphMode::empirical;

  // Empirical mode with empty `degrees` gets base degree 4 and level degree 2.
  static BreakerParams make(std::size_t n_elems, double u, GraphMode mode,
                            std::vector<std::uint64_t> degrees = {});

  std::size_t width() const noexcept { return std::size_t{1} << tau; }
};

// Minimum strict degrees: p0 >= 256u^2, and p_t > 16 (16u^2)^(2^t) for the
// level-t graph (t >= 1). Saturates at UINT64_MAX.
std::vector<std::uint64_t> strict_degrees(double u, unsigned tau);

struct TranspositionBase {
  std::vector<Transposition> transpositions;
  std::shared_ptr<const RegularGraph> source_graph;

  std::size_t size() const noexcept { return transpositions.size(); }
};

// Transpositions from the provider graph's edges with both endpoints among the
// first n_elems vertices (loops dropped).
TranspositionBase build_base(const BreakerParams& params, GraphProvider& provider);

enum class ArcCount {
  odd,      // smallest odd count >= ceil(L/cap), balanced sizes
  natural,  // ceil(L/cap) arcs of size cap, remainder arc in the middle
};

using Arc = std::vector<Elem>;

// Consecutive arcs along the cycle order, each of size <= arc_cap.
std::vector<Arc> partition_arcs(std::span<const Elem> cycle, std::size_t arc_cap,
                                ArcCount mode = ArcCount::odd);

// One base transposition per reflected arc pair of every cycle longer than k;
// lexicographically smallest qualifying edge. Pairwise disjoint. Throws
// CoverageError when a pair has no base edge.
std::vector<Transposition> break_cycles(const Permutation& pi, const TranspositionBase& base,
                                        const BreakerParams& params, ArcCount mode = ArcCount::odd);

// For each reflected arc pair (same order as break_cycles) every qualifying base transposition.
std::vector<std::vector<Transposition>> w_sets(const Permutation& pi, const TranspositionBase& base,
                                               const BreakerParams& params,
                                               ArcCount mode = ArcCount::odd);

// nullopt is an identity-padding slot.
using Slot = std::optional<Transposition>;

class BreakerFamily {
 public:
  BreakerFamily(std::size_t n_elems, unsigned tau, std::vector<Slot> slots);

  std::size_t n_elems() const noexcept { return n_elems_; }
  unsigned tau() const noexcept { return tau_; }
  std::size_t width() const noexcept { return std::size_t{1} << tau_; }
  std::size_t count() const noexcept { return slots_.size() / width(); }

  std::span<const Slot> member(std::size_t i) const {
    return std::span<const Slot>(slots_).subspan(i * width(), width());
  }

 private:
  std::size_t n_elems_;
  unsigned tau_;
  std::vector<Slot> slots_;
};

// Number of members the iterated construction yields from `base_items` level-0
// items under degrees[1..tau], padding odd levels with one dummy item.
std::uint64_t family_count(std::uint64_t base_items, std::span<const std::uint64_t> level_degrees);

// Level degrees (one per level) chosen greedily, largest first, so that
// family_count <= capacity. Throws ParameterError when even all-ones overflows.
std::vector<std::uint64_t> fit_level_degrees(std::uint64_t base_items, unsigned tau,
                                             std::uint64_t capacity, std::uint64_t max_degree = 8);

// Smallest prefix length r whose codec capacity covers `count` members.
std::size_t prefix_length_for(std::uint64_t count);

struct FamilyOptions {
  std::optional<std::uint64_t> capacity;  // codec m
  std::uint64_t max_slots = 200'000'000;
};

// Iterated graphs: level-t items are edges of a provider graph over level-(t-1)
// items, unfolding to the concatenation of both endpoints' slots.
BreakerFamily build_family(const TranspositionBase& base, const BreakerParams& params,
                           GraphProvider& provider, const FamilyOptions& options = {});

// t1 o t2 o ... o tj over the non-padding slots.
Permutation member_to_permutation(std::span<const Slot> member, std::size_t n_elems);

// Cycle structure of sigma, prepared once so that L_max(sigma o beta) for a
// short product beta costs O(j log j) instead of O(n).
class CycleIndex {
 public:
  explicit CycleIndex(const Permutation& sigma);

  std::size_t longest_after(std::span<const Slot> member) const;
  std::size_t longest() const noexcept { return by_length_.empty() ? 0 : len_[by_length_.front()]; }

 private:
  std::vector<std::uint32_t> cycle_of_;
  std::vector<std::uint32_t> pos_of_;
  std::vector<std::uint32_t> len_;
  std::vector<std::uint32_t> by_length_;  // cycle ids, longest first
  std::vector<std::vector<Elem>> cycles_;
};

// Smallest member index i with L_max(compose(sigma, member_to_permutation(T_i))) <= k.
std::uint64_t select_breaker(const Permutation& sigma, const BreakerFamily& family, std::size_t k);

// n * prod_t (p_t + 1) / 2 with p_t the smallest admissible prime for each strict degree.
long double strict_family_size_bound(std::size_t n_elems, double u);

// 8 n (4u)^(16u+4)
long double family_size_limit(std::size_t n_elems, double u);

// Header "n_elems tau count"; one member per line of "a:b" pairs, "0:0" = padding.
void write_family(std::ostream& out, const BreakerFamily& family);
BreakerFamily read_family(std::istream& in);

}  // namespace spyswap
