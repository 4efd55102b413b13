#include <iostream>
#include <map>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "spyswap/error.hpp"
#include "spyswap/harness.hpp"

using spyswap::RunConfig;

namespace {

void add_common(CLI::App* cmd, RunConfig& cfg) {
  cmd->add_option("--seed", cfg.seed, "RNG seed")->capture_default_str();
  cmd->add_option("--trials", cfg.trials, "Number of trials")->capture_default_str();
}

void add_mode(CLI::App* cmd, std::string& mode) {
  cmd->add_option("--mode", mode, "Graph mode")
      ->check(CLI::IsMember({"strict", "empirical"}))
      ->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Single-swap prisoners and drawers toolkit"};
  app.require_subcommand(1);
  RunConfig cfg;
  std::string mode = "empirical";
  std::string adversary = "random";
  std::size_t r = 0, k = 0, degree = 0;
  double u = 0;
  std::uint64_t p = 0, q = 0;

  auto* sim = app.add_subcommand("simulate", "Run the strategy against an adversary");
  sim->add_option("--n", cfg.n, "Number of prisoners")->capture_default_str();
  sim->add_option("--r", r, "Prefix length (default: smallest that fits)");
  sim->add_option("--u", u, "Cycle bound divisor (default 2.75 empirical, 1 strict)");
  sim->add_option("--adversary", adversary, "random|identity|full-cycle|reverse|file")
      ->check(CLI::IsMember({"random", "identity", "full-cycle", "reverse", "file"}))
      ->capture_default_str();
  sim->add_option("--in", cfg.input, "Assignment file for the file adversary");
  sim->add_option("--degree", degree, "Base graph degree (empirical)");
  sim->add_option("--levels", cfg.levels, "Level graph degrees (empirical)");
  sim->add_flag("--abstain", cfg.abstain, "Let the spy skip the swap when the drawers already decode");
  add_mode(sim, mode);
  add_common(sim, cfg);

  auto* mc = app.add_subcommand("montecarlo", "Estimate P(longest cycle <= k)");
  mc->add_option("--n", cfg.n, "Permutation size")->capture_default_str();
  mc->add_option("--k", k, "Cycle bound (default ceil(n/2))");
  add_common(mc, cfg);

  auto* codec = app.add_subcommand("codec-verify", "Exhaustive triple check and codec round trips");
  codec->add_option("--r", r, "Prefix length (default 24)");
  add_common(codec, cfg);

  auto* build = app.add_subcommand("expander-build", "Write an LPS or random regular graph edge list");
  build->add_option("--p", p, "LPS degree prime (default 13)");
  build->add_option("--q", q, "LPS field prime (default 5)");
  build->add_option("--n", cfg.n, "Vertices (empirical)");
  build->add_option("--degree", degree, "Degree (empirical)");
  build->add_option("--out", cfg.output, "Edge list path (default stdout)");
  add_mode(build, mode);
  build->add_option("--seed", cfg.seed, "RNG seed")->capture_default_str();

  auto* cert = app.add_subcommand("expander-certify", "Spectral certificate for a graph");
  cert->add_option("--p", p, "LPS degree prime (default 13)");
  cert->add_option("--q", q, "LPS field prime (default 5)");
  cert->add_option("--n", cfg.n, "Vertices (empirical)");
  cert->add_option("--degree", degree, "Degree (empirical)");
  cert->add_option("--in", cfg.input, "Edge list to certify instead of building");
  add_mode(cert, mode);
  cert->add_option("--seed", cfg.seed, "RNG seed")->capture_default_str();

  auto* brk = app.add_subcommand("breaker-verify", "Cycle breaking checks on a transposition base");
  brk->add_option("--n", cfg.n, "Elements")->capture_default_str();
  brk->add_option("--u", u, "Cycle bound divisor (default 2)");
  brk->add_option("--degree", degree, "Base degree (empirical, default 32)");
  add_mode(brk, mode);
  add_common(brk, cfg);

  auto* dk = app.add_subcommand("dickman", "Dickman rho");
  dk->add_option("--u", u, "Argument")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << nlohmann::json{{"error", "usage_error"}, {"message", e.what()}}.dump() << '\n';
    return spyswap::kExitUsage;
  }

  cfg.command = app.get_subcommands().front()->get_name();
  auto* sub = app.get_subcommands().front();
  auto given = [&](const char* name) {
    try {
      return sub->get_option(name)->count() > 0;
    } catch (const CLI::OptionNotFound&) {
      return false;
    }
  };
  if (given("--r")) cfg.r = r;
  if (given("--k")) cfg.k = k;
  if (given("--u")) cfg.u = u;
  if (given("--p")) cfg.p = p;
  if (given("--q")) cfg.q = q;
  if (given("--degree")) cfg.degree = degree;
  cfg.mode = mode == "strict" ? spyswap::GraphMode::strict : spyswap::GraphMode::empirical;
  cfg.adversary = spyswap::parse_adversary(adversary);
  if (cfg.command == "codec-verify" && !given("--trials")) cfg.trials = 1000;
  if (cfg.command == "breaker-verify" && !given("--trials")) cfg.trials = 100;
  if (cfg.command == "expander-build" || cfg.command == "expander-certify") {
    if (given("--degree")) cfg.mode = spyswap::GraphMode::empirical;
  }
  return spyswap::run(cfg, std::cout, std::cerr);
}
