#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "spyswap/cycle_breaker.hpp"
#include "spyswap/lps_expander.hpp"
#include "spyswap/permutation.hpp"
#include "spyswap/swap_codec.hpp"

namespace spyswap {

// contents(i) is the prisoner number in drawer i.
struct DrawerAssignment {
  Permutation contents;

  std::size_t size() const noexcept { return contents.size(); }
};

// What the caller asks for; unset fields get defaults in resolve_params.
struct ParamRequest {
  std::size_t n = 0;
  std::optional<std::size_t> r;
  std::optional<double> u;  // default 2.75 (empirical), 1 (strict)
  GraphMode mode = GraphMode::empirical;
  std::optional<std::uint64_t> base_degree;          // empirical only, default 4
  std::optional<std::vector<std::uint64_t>> levels;  // empirical only, default fitted to m
  std::uint64_t seed = 0x5eed5eedULL;
};

struct StrategyParams {
  std::size_t n = 0;
  std::size_t r = 0;
  double u = 1.0;
  std::size_t k = 0;  // ceil((n - r) / u)
  CodecParams codec;
  BreakerParams breaker;
  GraphMode mode = GraphMode::empirical;
  std::uint64_t seed = 0;

  std::size_t budget() const noexcept { return r + k; }
  // Throws ParameterError on r < 12, r + k >= n, or k mismatch.
  void validate() const;
};

StrategyParams resolve_params(const ParamRequest& request);

// Everything agreed before the drawers are filled.
struct Strategy {
  StrategyParams params;
  TranspositionBase base;
  BreakerFamily family;
};

// Throws ParameterError when the family overflows the codec capacity.
Strategy build_strategy(const StrategyParams& params);

Permutation derive_prefix_pattern(const DrawerAssignment& a, std::size_t r);
Permutation derive_sigma(const DrawerAssignment& a, std::size_t r);

struct SpyPlan {
  std::optional<Transposition> swap;  // drawer positions, both <= r
  MessageIndex message = 0;
};

// With allow_abstain the spy leaves the drawers alone when they already decode to the message.
SpyPlan spy_plan(const DrawerAssignment& a, const Strategy& strategy, bool allow_abstain = false);

DrawerAssignment apply_plan(const DrawerAssignment& a, const SpyPlan& plan);

struct PrisonerResult {
  bool success = false;
  std::size_t opens = 0;
};

// One prisoner working alone from the post-swap drawers; stops at budget r + k.
PrisonerResult prisoner_run(const DrawerAssignment& a_post, Elem prisoner, const Strategy& strategy);

// What every prisoner derives identically from the post-swap drawers.
class PrisonerContext {
 public:
  PrisonerContext(const DrawerAssignment& a_post, const Strategy& strategy);

  PrisonerResult run(Elem prisoner) const;
  MessageIndex message() const noexcept { return message_; }

 private:
  const DrawerAssignment* drawers_;
  const Strategy* strategy_;
  std::vector<std::uint32_t> prefix_pos_;  // drawer of a prefix number, 0 if in suffix
  std::vector<std::uint32_t> rank_;        // h_T
  MessageIndex message_ = 0;
  Permutation beta_;
};

struct SimulationReport {
  std::optional<Transposition> swap_made;
  MessageIndex message = 0;
  std::vector<std::size_t> per_prisoner_opens;
  std::size_t max_opens = 0;
  bool all_succeeded = false;

  // (opens, prisoners) ascending by opens
  std::vector<std::pair<std::size_t, std::size_t>> histogram() const;
};

SimulationReport simulate(const DrawerAssignment& a, const Strategy& strategy, bool allow_abstain = false);

// Single-line JSON: trial, swap, message, max_opens, histogram, all_succeeded.
std::string report_json(const SimulationReport& report, std::size_t trial);

}  // namespace spyswap
