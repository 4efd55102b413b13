#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>

#include "spyswap/permutation.hpp"

namespace spyswap {

struct TrialConfig {
  std::size_t n = 100;
  std::size_t k = 50;  // drawer budget / cycle bound
  std::size_t trials = 100000;
  std::uint64_t seed = 0;

  void validate() const;  // throws InvalidInput
};

struct ProbabilityEstimate {
  double p_hat = 0.0;
  double stderr_ = 0.0;
  std::size_t trials = 0;
  std::size_t successes = 0;
};

struct FollowResult {
  bool success = false;
  std::size_t opens = 0;
};

// Classical strategy: open the drawer with your own number, then the drawer
// named by what you found, until found or the budget runs out.
FollowResult pointer_follow(const Permutation& assignment, Elem prisoner, std::size_t budget);

// Half-split spy baseline. Returns a value swap (swap the drawers holding these
// two numbers) that cuts the longest cycle into pieces of ceil(L/2) and
// floor(L/2), or nullopt when the longest cycle is already <= ceil(n/2).
std::optional<Transposition> spy_half_split(const Permutation& assignment);

// P(longest cycle <= k) over uniform permutations. Trial t uses substream(seed, t).
ProbabilityEstimate mc_no_large_cycle(const TrialConfig& cfg);

// Dickman's rho via trapezoidal integration of u rho'(u) = -rho(u-1) with step 1e-4.
double dickman_rho(double u);

std::string estimate_csv_header();
std::string estimate_csv_row(const TrialConfig& cfg, const ProbabilityEstimate& est);

}  // namespace spyswap
