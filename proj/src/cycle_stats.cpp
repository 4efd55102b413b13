#include "spyswap/cycle_stats.hpp"

#include <atomic>
#include <cmath>
#include <sstream>
#include <vector>

#include "spyswap/error.hpp"
#include "spyswap/parallel.hpp"
#include "spyswap/rng.hpp"

namespace spyswap {

void TrialConfig::validate() const {
  if (n < 1) throw InvalidInput("n must be >= 1");
  if (k < 1 || k > n) throw InvalidInput("k must be in 1..n");
  if (trials < 1) throw InvalidInput("trials must be >= 1");
}

FollowResult pointer_follow(const Permutation& assignment, Elem prisoner, std::size_t budget) {
  if (prisoner < 1 || prisoner > assignment.size()) {
    throw InvalidInput("prisoner " + std::to_string(prisoner) + " out of range");
  }
  if (budget < 1) throw InvalidInput("budget must be >= 1");
  FollowResult r;
  Elem drawer = prisoner;
  while (r.opens < budget) {
    ++r.opens;
    const Elem found = assignment(drawer);
    if (found == prisoner) {
      r.success = true;
      break;
    }
    drawer = found;
  }
  return r;
}

std::optional<Transposition> spy_half_split(const Permutation& assignment) {
  const std::size_t n = assignment.size();
  if (n < 2) throw InvalidInput("spy_half_split needs n >= 2");
  const auto dec = cycle_decompose(assignment);
  if (dec.max_len <= (n + 1) / 2) return std::nullopt;
  // First longest cycle in start order; cycles already begin at their minimum.
  for (const auto& cycle : dec.cycles) {
    if (cycle.size() != dec.max_len) continue;
    const std::size_t cut = (cycle.size() + 1) / 2;
    // Value swap of c0 and c_cut: c_{L-1} -> c_cut and c_{cut-1} -> c0.
    return Transposition(cycle.front(), cycle[cut]);
  }
  throw InvariantViolation("longest cycle not found");
}

ProbabilityEstimate mc_no_large_cycle(const TrialConfig& cfg) {
  cfg.validate();
  std::atomic<std::size_t> successes{0};
  const std::size_t chunks = std::min<std::size_t>(cfg.trials, 64);
  parallel_for(chunks, [&](std::size_t chunk) {
    const std::size_t begin = cfg.trials * chunk / chunks;
    const std::size_t end = cfg.trials * (chunk + 1) / chunks;
    std::size_t local = 0;
    std::vector<Elem> perm(cfg.n);
    std::vector<bool> seen(cfg.n);
    for (std::size_t t = begin; t < end; ++t) {
      auto rng = substream(cfg.seed, t);
      for (std::size_t i = 0; i < cfg.n; ++i) perm[i] = static_cast<Elem>(i);
      for (std::size_t i = cfg.n; i > 1; --i) {
        std::swap(perm[i - 1], perm[rng.bounded(i)]);
      }
      std::fill(seen.begin(), seen.end(), false);
      bool ok = true;
      for (std::size_t s = 0; s < cfg.n && ok; ++s) {
        if (seen[s]) continue;
        std::size_t len = 0;
        for (std::size_t x = s; !seen[x]; x = perm[x]) {
          seen[x] = true;
          ++len;
        }
        ok = len <= cfg.k;
      }
      if (ok) ++local;
    }
    successes += local;
  });
  ProbabilityEstimate est;
  est.trials = cfg.trials;
  est.successes = successes.load();
  est.p_hat = static_cast<double>(est.successes) / static_cast<double>(cfg.trials);
  est.stderr_ = std::sqrt(est.p_hat * (1.0 - est.p_hat) / static_cast<double>(cfg.trials));
  return est;
}

double dickman_rho(double u) {
  if (!std::isfinite(u)) throw InvalidInput("dickman_rho: u must be finite");
  if (u < 0) throw InvalidInput("dickman_rho: u must be >= 0");
  if (u <= 1.0) return 1.0;
  constexpr std::size_t kPerUnit = 10000;
  constexpr double h = 1.0 / kPerUnit;
  const auto steps = static_cast<std::size_t>(std::ceil(u * kPerUnit));
  std::vector<double> rho(steps + 1);
  for (std::size_t i = 0; i <= std::min(steps, kPerUnit); ++i) rho[i] = 1.0;
  // rho'(t) = -rho(t-1)/t; grid point t_i = i*h, so t_i - 1 is index i - kPerUnit.
  for (std::size_t i = kPerUnit + 1; i <= steps; ++i) {
    const double t0 = static_cast<double>(i - 1) * h;
    const double t1 = static_cast<double>(i) * h;
    const double f0 = rho[i - 1 - kPerUnit] / t0;
    const double f1 = rho[i - kPerUnit] / t1;
    rho[i] = rho[i - 1] - 0.5 * h * (f0 + f1);
  }
  const double pos = u * kPerUnit;
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  if (lo >= steps) return rho[steps];
  const double frac = pos - static_cast<double>(lo);
  return rho[lo] + frac * (rho[lo + 1] - rho[lo]);
}

std::string estimate_csv_header() { return "n,k,trials,seed,p_hat,stderr"; }

std::string estimate_csv_row(const TrialConfig& cfg, const ProbabilityEstimate& est) {
  std::ostringstream os;
  os.precision(6);
  os << std::fixed << cfg.n << ',' << cfg.k << ',' << cfg.trials << ',' << cfg.seed << ','
     << est.p_hat << ',' << est.stderr_;
  return os.str();
}

}  // namespace spyswap
