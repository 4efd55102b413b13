#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "spyswap/lps_expander.hpp"

namespace spyswap {

enum class Adversary { random, identity, full_cycle, reverse, file };

Adversary parse_adversary(const std::string& name);

inline constexpr std::uint64_t kDefaultSeed = 20240601;

struct RunConfig {
  std::string command;
  std::size_t n = 100;
  std::optional<std::size_t> r;
  std::optional<double> u;
  std::optional<std::size_t> k;
  std::uint64_t seed = kDefaultSeed;
  std::size_t trials = 1;
  GraphMode mode = GraphMode::empirical;
  Adversary adversary = Adversary::random;
  std::string input;
  std::string output;
  bool abstain = false;
  // expander verbs
  std::optional<std::uint64_t> p;
  std::optional<std::uint64_t> q;
  std::optional<std::size_t> degree;
  std::vector<std::uint64_t> levels;
};

enum ExitCode : int {
  kExitOk = 0,
  kExitFailure = 1,
  kExitUsage = 2,
  kExitParse = 3,
  kExitCoverage = 4,
  kExitCapability = 5,
};

int exit_code_for(const std::string& error_code);

// Each writes its report to `out`; diagnostics (wall time) go to `err`.
int run_simulate(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int run_montecarlo(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int run_codec_verify(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int run_expander_build(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int run_expander_certify(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int run_breaker_verify(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int run_dickman(const RunConfig& cfg, std::ostream& out, std::ostream& err);

// Dispatches on cfg.command; library errors become one JSON line on `err`.
int run(const RunConfig& cfg, std::ostream& out, std::ostream& err);

}  // namespace spyswap
