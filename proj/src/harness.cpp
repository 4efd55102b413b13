#include "spyswap/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "spyswap/cycle_breaker.hpp"
#include "spyswap/cycle_stats.hpp"
#include "spyswap/error.hpp"
#include "spyswap/parallel.hpp"
#include "spyswap/protocol.hpp"
#include "spyswap/rng.hpp"
#include "spyswap/swap_codec.hpp"

namespace spyswap {

using json = nlohmann::ordered_json;

namespace {

class WallClock {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

void report_wall(std::ostream& err, const std::string& verb, const WallClock& clock) {
  err << "{\"verb\":\"" << verb << "\",\"wall_seconds\":" << std::fixed << std::setprecision(3)
      << clock.seconds() << "}\n";
  err.unsetf(std::ios::floatfield);
}

Permutation adversary_permutation(Adversary adv, std::size_t n, std::uint64_t seed, std::size_t trial) {
  std::vector<Elem> m(n);
  switch (adv) {
    case Adversary::identity:
      return Permutation::identity(n);
    case Adversary::full_cycle:
      for (std::size_t i = 0; i < n; ++i) m[i] = static_cast<Elem>((i + 1) % n + 1);
      return Permutation(std::move(m));
    case Adversary::reverse:
      for (std::size_t i = 0; i < n; ++i) m[i] = static_cast<Elem>(n - i);
      return Permutation(std::move(m));
    case Adversary::random: {
      auto rng = substream(seed, trial);
      return random_permutation(n, rng);
    }
    case Adversary::file:
      break;
  }
  throw InvalidInput("file adversary has no generator");
}

std::vector<Permutation> read_assignment_file(const std::string& path) {
  if (path.empty()) throw InvalidInput("--in is required for the file adversary");
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path + "'");
  auto perms = read_permutations(in);
  if (perms.empty()) throw ParseError("'" + path + "' holds no permutations");
  for (const auto& p : perms) {
    if (p.size() != perms.front().size()) throw ParseError("'" + path + "' mixes permutation sizes");
  }
  return perms;
}

struct CheckRow {
  std::string name;
  std::size_t cases = 0;
  std::size_t pass = 0;

  void record(bool ok) {
    ++cases;
    if (ok) ++pass;
  }
  std::size_t fail() const { return cases - pass; }
};

int write_checks(std::ostream& out, const std::vector<CheckRow>& rows) {
  out << "check,cases,pass,fail\n";
  bool ok = true;
  for (const auto& row : rows) {
    out << row.name << ',' << row.cases << ',' << row.pass << ',' << row.fail() << '\n';
    ok = ok && row.fail() == 0;
  }
  return ok ? kExitOk : kExitFailure;
}

}  // namespace

Adversary parse_adversary(const std::string& name) {
  if (name == "random") return Adversary::random;
  if (name == "identity") return Adversary::identity;
  if (name == "full-cycle") return Adversary::full_cycle;
  if (name == "reverse") return Adversary::reverse;
  if (name == "file") return Adversary::file;
  throw InvalidInput("unknown adversary '" + name + "'");
}

int exit_code_for(const std::string& code) {
  if (code == "parse_error") return kExitParse;
  if (code == "coverage_failure") return kExitCoverage;
  if (code == "capability_error") return kExitCapability;
  if (code == "invariant_violation") return kExitFailure;
  return kExitUsage;
}

int run_simulate(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  WallClock clock;
  std::vector<Permutation> file_perms;
  std::size_t n = cfg.n;
  std::size_t trials = cfg.trials;
  if (cfg.adversary == Adversary::file) {
    file_perms = read_assignment_file(cfg.input);
    n = file_perms.front().size();
    trials = file_perms.size();
  }
  if (trials == 0) throw InvalidInput("trials must be >= 1");

  ParamRequest req;
  req.n = n;
  req.r = cfg.r;
  req.u = cfg.u;
  req.mode = cfg.mode;
  req.seed = cfg.seed;
  if (cfg.degree) req.base_degree = *cfg.degree;
  if (!cfg.levels.empty()) req.levels = cfg.levels;
  const auto params = resolve_params(req);
  const auto strategy = build_strategy(params);

  std::vector<std::string> lines(trials);
  std::vector<int> status(trials, kExitOk);
  std::vector<std::size_t> max_opens(trials, 0);
  parallel_for(trials, [&](std::size_t t) {
    const DrawerAssignment a{cfg.adversary == Adversary::file ? file_perms[t]
                                                              : adversary_permutation(cfg.adversary, n, cfg.seed, t)};
    try {
      const auto report = simulate(a, strategy, cfg.abstain);
      lines[t] = report_json(report, t);
      max_opens[t] = report.max_opens;
      if (!report.all_succeeded) status[t] = kExitFailure;
    } catch (const CoverageError& e) {
      json j;
      j["trial"] = t;
      j["error"] = e.code();
      j["message"] = e.what();
      lines[t] = j.dump();
      status[t] = kExitCoverage;
    }
  });

  std::size_t succeeded = 0;
  int code = kExitOk;
  for (std::size_t t = 0; t < trials; ++t) {
    out << lines[t] << '\n';
    if (status[t] == kExitOk) {
      ++succeeded;
    } else if (code == kExitOk || status[t] == kExitFailure) {
      code = status[t];
    }
  }
  json summary;
  summary["n"] = params.n;
  summary["r"] = params.r;
  summary["u"] = params.u;
  summary["k"] = params.k;
  summary["budget"] = params.budget();
  summary["family"] = strategy.family.count();
  summary["messages"] = params.codec.m;
  summary["trials"] = trials;
  summary["succeeded"] = succeeded;
  summary["success_rate"] = static_cast<double>(succeeded) / static_cast<double>(trials);
  summary["max_max_opens"] = *std::max_element(max_opens.begin(), max_opens.end());
  out << json{{"summary", summary}}.dump() << '\n';
  report_wall(err, "simulate", clock);
  return code;
}

int run_montecarlo(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  WallClock clock;
  TrialConfig tc;
  tc.n = cfg.n;
  tc.k = cfg.k.value_or((cfg.n + 1) / 2);
  tc.trials = cfg.trials;
  tc.seed = cfg.seed;
  tc.validate();
  const auto est = mc_no_large_cycle(tc);
  out << estimate_csv_header() << '\n' << estimate_csv_row(tc, est) << '\n';
  report_wall(err, "montecarlo", clock);
  return kExitOk;
}

int run_codec_verify(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  WallClock clock;
  const std::size_t r = cfg.r.value_or(24);
  const auto params = CodecParams::for_prefix(r);

  CheckRow triple{"triple_swap"};
  std::vector<Elem> six{1, 2, 3, 4, 5, 6};
  do {
    const Permutation p(six);
    const auto bits = g0_triples(p);
    bool ok = false;
    try {
      const auto t = find_swap_flipping_pair(p, 0, 1);
      const auto after = g0_triples(apply_transposition(p, t, SwapSide::position));
      ok = after[0] != bits[0] && after[1] != bits[1] && t.a() <= 3 && t.b() >= 4;
    } catch (const InvariantViolation&) {
      ok = false;
    }
    triple.record(ok);
  } while (std::next_permutation(six.begin(), six.end()));

  CheckRow round{"round_trip"};
  const std::size_t patterns = cfg.trials;
  std::vector<std::size_t> fails(patterns, 0);
  parallel_for(patterns, [&](std::size_t i) {
    auto rng = substream(cfg.seed, i);
    const auto p = random_permutation(r, rng);
    for (MessageIndex target = 0; target < params.m; ++target) {
      const auto t = encode_message(p, target, params);
      const bool ok = t.b() <= r &&
                      decode_message(apply_transposition(p, t, SwapSide::position), params) == target;
      if (!ok) ++fails[i];
    }
  });
  round.cases = patterns * params.m;
  std::size_t failed = 0;
  for (auto f : fails) failed += f;
  round.pass = round.cases - failed;

  const int code = write_checks(out, {triple, round});
  report_wall(err, "codec-verify", clock);
  return code;
}

namespace {

RegularGraph expander_from_config(const RunConfig& cfg, double& p_out) {
  if (!cfg.input.empty()) {
    std::ifstream in(cfg.input);
    if (!in) throw ParseError("cannot open '" + cfg.input + "'");
    auto g = read_edge_list(in);
    p_out = static_cast<double>(g.degree()) - 1.0;
    return g;
  }
  if (cfg.mode == GraphMode::empirical && cfg.degree) {
    auto rng = substream(cfg.seed, 0);
    p_out = static_cast<double>(*cfg.degree) - 1.0;
    return random_regular_graph(cfg.n, *cfg.degree, rng);
  }
  const auto params = LpsParams::make(cfg.p.value_or(13), cfg.q.value_or(5));
  p_out = static_cast<double>(params.p);
  return lps_construct(params);
}

}  // namespace

int run_expander_build(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  WallClock clock;
  double p = 0;
  RunConfig c = cfg;
  c.input.clear();
  const auto g = expander_from_config(c, p);
  if (cfg.output.empty() || cfg.output == "-") {
    write_edge_list(out, g);
  } else {
    std::ofstream file(cfg.output);
    if (!file) throw InvalidInput("cannot write '" + cfg.output + "'");
    write_edge_list(file, g);
    json j;
    j["vertices"] = g.n_vertices();
    j["degree"] = g.degree();
    j["edges"] = g.edges().size();
    j["bipartite"] = g.bipartite();
    j["path"] = cfg.output;
    out << j.dump() << '\n';
  }
  report_wall(err, "expander-build", clock);
  return kExitOk;
}

int run_expander_certify(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  WallClock clock;
  double p = 0;
  const auto g = expander_from_config(cfg, p);
  SpectralOptions so;
  so.seed = cfg.seed;
  const auto cert = spectral_check(g, p, so);
  json j;
  j["vertices"] = g.n_vertices();
  j["degree"] = g.degree();
  j["bipartite"] = g.bipartite();
  j["second_eigenvalue"] = cert.second_eigenvalue;
  j["bound"] = cert.ramanujan_bound;
  j["method"] = cert.method == SpectralMethod::dense ? "dense" : "power_estimate";
  j["within_bound"] = cert.within_bound;
  j["verified"] = cert.verified;
  out << j.dump() << '\n';
  report_wall(err, "expander-certify", clock);
  return cert.within_bound ? kExitOk : kExitFailure;
}

int run_breaker_verify(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  WallClock clock;
  const double u = cfg.u.value_or(2.0);
  std::vector<std::uint64_t> degrees;
  if (cfg.mode == GraphMode::empirical) {
    const auto probe = BreakerParams::make(cfg.n, u, cfg.mode);
    degrees.assign(probe.tau + 1, 2);
    degrees[0] = cfg.degree.value_or(32);
  }
  const auto params = BreakerParams::make(cfg.n, u, cfg.mode, degrees);
  ProviderOptions po;
  po.mode = cfg.mode;
  po.seed = cfg.seed;
  GraphProvider provider(po);
  const auto base = build_base(params, provider);
  const std::size_t max_pieces = static_cast<std::size_t>(std::floor(2.0 * u + 1e-9));

  auto splits = [&](const Permutation& pi, const std::vector<Transposition>& ts) {
    std::vector<Elem> touched;
    for (const auto& t : ts) {
      touched.push_back(t.a());
      touched.push_back(t.b());
    }
    std::sort(touched.begin(), touched.end());
    if (std::adjacent_find(touched.begin(), touched.end()) != touched.end()) return false;
    std::vector<Slot> slots(ts.begin(), ts.end());
    const auto beta = member_to_permutation(slots, cfg.n);
    return longest_cycle(compose(pi, beta)) <= params.k;
  };

  std::vector<Elem> cyc(cfg.n);
  for (std::size_t i = 0; i < cfg.n; ++i) cyc[i] = static_cast<Elem>((i + 1) % cfg.n + 1);
  const Permutation full(cyc);

  CheckRow full_row{"full_cycle_break"};
  {
    bool ok = false;
    try {
      const auto ts = break_cycles(full, base, params);
      ok = ts.size() <= max_pieces && splits(full, ts);
    } catch (const CoverageError&) {
      ok = false;
    }
    full_row.record(ok);
  }

  CheckRow random_row{"random_break"};
  CheckRow any_row{"w_sets_any_choice"};
  std::vector<std::vector<Transposition>> sets;
  try {
    sets = w_sets(full, base, params);
  } catch (const CoverageError&) {
    any_row.record(false);
  }
  for (std::size_t t = 0; t < cfg.trials; ++t) {
    auto rng = substream(cfg.seed, t);
    const auto pi = random_permutation(cfg.n, rng);
    bool ok = false;
    try {
      const auto ts = break_cycles(pi, base, params);
      ok = splits(pi, ts);
    } catch (const CoverageError&) {
      ok = false;
    }
    random_row.record(ok);
    if (!sets.empty()) {
      std::vector<Transposition> pick;
      for (const auto& w : sets) pick.push_back(w[rng.bounded(w.size())]);
      any_row.record(pick.size() <= max_pieces && splits(full, pick));
    }
  }
  const int code = write_checks(out, {full_row, random_row, any_row});
  report_wall(err, "breaker-verify", clock);
  return code;
}

int run_dickman(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  WallClock clock;
  if (!cfg.u) throw InvalidInput("--u is required");
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10f", dickman_rho(*cfg.u));
  out << "u,rho\n" << *cfg.u << ',' << buf << '\n';
  report_wall(err, "dickman", clock);
  return kExitOk;
}

int run(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  try {
    if (cfg.command == "simulate") return run_simulate(cfg, out, err);
    if (cfg.command == "montecarlo") return run_montecarlo(cfg, out, err);
    if (cfg.command == "codec-verify") return run_codec_verify(cfg, out, err);
    if (cfg.command == "expander-build") return run_expander_build(cfg, out, err);
    if (cfg.command == "expander-certify") return run_expander_certify(cfg, out, err);
    if (cfg.command == "breaker-verify") return run_breaker_verify(cfg, out, err);
    if (cfg.command == "dickman") return run_dickman(cfg, out, err);
    throw InvalidInput("unknown command '" + cfg.command + "'");
  } catch (const Error& e) {
    err << json{{"error", e.code()}, {"message", e.what()}}.dump() << '\n';
    return exit_code_for(e.code());
  }
}

}  // namespace spyswap
