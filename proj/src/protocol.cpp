#include "spyswap/protocol.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <string>

#include <json.hpp>

#include "spyswap/error.hpp"

namespace spyswap {

namespace {

std::uint64_t base_item_count(std::size_t n_elems, std::uint64_t degree) {
  if (degree >= n_elems) {
    throw ParameterError("base degree " + std::to_string(degree) + " needs more than " +
                         std::to_string(n_elems) + " elements");
  }
  if ((n_elems * degree) % 2 == 0) return n_elems * degree / 2;
  return (n_elems + 1) * degree / 2 - degree;
}

std::size_t cycle_bound(std::size_t n_elems, double u) {
  return static_cast<std::size_t>(std::ceil(static_cast<double>(n_elems) / u - 1e-12));
}

// Resolved parameters for a fixed r, or nullopt when the family cannot fit the codec.
std::optional<StrategyParams> try_prefix(const ParamRequest& req, std::size_t r, double u) {
  StrategyParams sp;
  sp.n = req.n;
  sp.r = r;
  sp.u = u;
  sp.mode = req.mode;
  sp.seed = req.seed;
  sp.codec = CodecParams::for_prefix(r);
  const std::size_t n_elems = req.n - r;
  sp.k = cycle_bound(n_elems, u);
  if (req.mode == GraphMode::strict) {
    sp.breaker = BreakerParams::make(n_elems, u, GraphMode::strict);
    const long double bound = strict_family_size_bound(n_elems, u);
    if (!(bound <= static_cast<long double>(sp.codec.m))) return std::nullopt;
    return sp;
  }
  const auto tau_probe = BreakerParams::make(n_elems, u, GraphMode::empirical);
  const std::uint64_t base_degree = req.base_degree.value_or(4);
  const std::uint64_t items = base_item_count(n_elems, base_degree);
  std::vector<std::uint64_t> levels;
  if (req.levels) {
    levels = *req.levels;
    if (levels.size() != tau_probe.tau) {
      throw InvalidInput("expected " + std::to_string(tau_probe.tau) + " level degrees");
    }
    if (family_count(items, levels) > sp.codec.m) return std::nullopt;
  } else {
    try {
      levels = fit_level_degrees(items, tau_probe.tau, sp.codec.m);
    } catch (const ParameterError&) {
      return std::nullopt;
    }
  }
  std::vector<std::uint64_t> degrees{base_degree};
  degrees.insert(degrees.end(), levels.begin(), levels.end());
  sp.breaker = BreakerParams::make(n_elems, u, GraphMode::empirical, std::move(degrees));
  return sp;
}

}  // namespace

void StrategyParams::validate() const {
  if (r < 12) throw ParameterError("r must be >= 12");
  if (r >= n) throw ParameterError("r must be < n");
  if (k != cycle_bound(n - r, u)) throw ParameterError("k != ceil((n - r)/u)");
  if (r + k >= n) {
    throw ParameterError("r + k = " + std::to_string(r + k) + " >= n = " + std::to_string(n) +
                         "; the strategy would not beat opening everything");
  }
  if (codec.r != r) throw ParameterError("codec built for a different r");
  if (breaker.n_elems != n - r || breaker.k != k) throw ParameterError("breaker built for a different n - r");
}

StrategyParams resolve_params(const ParamRequest& req) {
  if (req.n < 16) throw InvalidInput("n must be >= 16");
  const double u = req.u.value_or(req.mode == GraphMode::strict ? 1.0 : 2.75);
  if (!(u >= 1.0) || !std::isfinite(u)) throw InvalidInput("u must be a finite real >= 1");
  if (req.mode == GraphMode::strict && (req.base_degree || req.levels)) {
    throw InvalidInput("strict mode derives its own degrees");
  }
  if (req.r) {
    if (*req.r < 12 || *req.r >= req.n) throw InvalidInput("r must satisfy 12 <= r < n");
    auto sp = try_prefix(req, *req.r, u);
    if (!sp) {
      throw ParameterError("breaker family does not fit the " +
                           std::to_string(CodecParams::for_prefix(*req.r).m) + " messages of r = " +
                           std::to_string(*req.r));
    }
    sp->validate();
    return *sp;
  }
  for (std::size_t r = 12; r < req.n; r += 3) {
    const std::size_t n_elems = req.n - r;
    if (r + cycle_bound(n_elems, u) >= req.n) break;
    if (static_cast<double>(n_elems) / (4.0 * u) < 1.0) break;
    auto sp = try_prefix(req, r, u);
    if (sp) {
      sp->validate();
      return *sp;
    }
  }
  if (req.mode == GraphMode::strict) {
    throw CapabilityError("strict breaker family needs a prefix beyond n = " + std::to_string(req.n) +
                          " (family bound " + std::to_string(static_cast<double>(
                                                  strict_family_size_bound(req.n - 12, u))) +
                          ")");
  }
  throw ParameterError("no prefix length r with r + ceil((n-r)/u) < n fits the breaker family for n = " +
                       std::to_string(req.n));
}

Strategy build_strategy(const StrategyParams& params) {
  params.validate();
  ProviderOptions po;
  po.mode = params.mode;
  po.seed = params.seed;
  GraphProvider provider(po);
  auto base = build_base(params.breaker, provider);
  FamilyOptions fo;
  fo.capacity = params.codec.m;
  auto family = build_family(base, params.breaker, provider, fo);
  return Strategy{params, std::move(base), std::move(family)};
}

Permutation derive_prefix_pattern(const DrawerAssignment& a, std::size_t r) {
  if (r == 0 || r >= a.size()) throw InvalidInput("prefix length must satisfy 1 <= r < n");
  const auto m = a.contents.mapping();
  std::vector<std::int64_t> values(m.begin(), m.begin() + static_cast<std::ptrdiff_t>(r));
  return pattern(values);
}

namespace {

// rank[v] = h_T(v) for v outside the prefix, 0 for prefix numbers.
std::vector<std::uint32_t> suffix_ranks(const DrawerAssignment& a, std::size_t r) {
  const std::size_t n = a.size();
  const auto m = a.contents.mapping();
  std::vector<std::uint32_t> rank(n + 1, 1);
  rank[0] = 0;
  for (std::size_t i = 0; i < r; ++i) rank[m[i]] = 0;
  std::uint32_t next = 0;
  for (std::size_t v = 1; v <= n; ++v) {
    if (rank[v] != 0) rank[v] = ++next;
  }
  return rank;
}

}  // namespace

Permutation derive_sigma(const DrawerAssignment& a, std::size_t r) {
  if (r == 0 || r >= a.size()) throw InvalidInput("prefix length must satisfy 1 <= r < n");
  const auto rank = suffix_ranks(a, r);
  const auto m = a.contents.mapping();
  std::vector<Elem> sigma;
  sigma.reserve(a.size() - r);
  for (std::size_t j = r; j < a.size(); ++j) sigma.push_back(rank[m[j]]);
  return Permutation(std::move(sigma));
}

SpyPlan spy_plan(const DrawerAssignment& a, const Strategy& strategy, bool allow_abstain) {
  const auto& p = strategy.params;
  if (a.size() != p.n) throw DimensionError("assignment size != n");
  SpyPlan plan;
  plan.message = select_breaker(derive_sigma(a, p.r), strategy.family, p.k);
  const auto prefix = derive_prefix_pattern(a, p.r);
  if (allow_abstain && decode_message(prefix, p.codec) == plan.message) return plan;
  plan.swap = encode_message(prefix, plan.message, p.codec);
  return plan;
}

DrawerAssignment apply_plan(const DrawerAssignment& a, const SpyPlan& plan) {
  if (!plan.swap) return a;
  return DrawerAssignment{apply_transposition(a.contents, *plan.swap, SwapSide::position)};
}

PrisonerContext::PrisonerContext(const DrawerAssignment& a_post, const Strategy& strategy)
    : drawers_(&a_post),
      strategy_(&strategy),
      prefix_pos_(a_post.size() + 1, 0),
      rank_(suffix_ranks(a_post, strategy.params.r)),
      beta_(Permutation::identity(1)) {
  const auto& p = strategy.params;
  if (a_post.size() != p.n) throw DimensionError("assignment size != n");
  const auto m = a_post.contents.mapping();
  for (std::size_t i = 0; i < p.r; ++i) prefix_pos_[m[i]] = static_cast<std::uint32_t>(i + 1);
  message_ = decode_message(derive_prefix_pattern(a_post, p.r), p.codec);
  if (message_ >= strategy.family.count()) {
    // Unused message indices behave as the identity breaker.
    beta_ = Permutation::identity(p.n - p.r);
  } else {
    beta_ = member_to_permutation(strategy.family.member(message_), p.n - p.r);
  }
}

PrisonerResult PrisonerContext::run(Elem prisoner) const {
  const auto& p = strategy_->params;
  if (prisoner < 1 || prisoner > p.n) throw InvalidInput("prisoner out of range");
  if (prefix_pos_[prisoner] != 0) return {true, prefix_pos_[prisoner]};
  const auto& contents = drawers_->contents;
  std::size_t opens = p.r;
  Elem x = rank_[prisoner];
  while (opens < p.budget()) {
    const Elem drawer = static_cast<Elem>(p.r) + beta_(x);
    ++opens;
    const Elem found = contents(drawer);
    if (found == prisoner) return {true, opens};
    x = rank_[found];
  }
  return {false, opens};
}

PrisonerResult prisoner_run(const DrawerAssignment& a_post, Elem prisoner, const Strategy& strategy) {
  return PrisonerContext(a_post, strategy).run(prisoner);
}

std::vector<std::pair<std::size_t, std::size_t>> SimulationReport::histogram() const {
  std::map<std::size_t, std::size_t> counts;
  for (auto o : per_prisoner_opens) ++counts[o];
  return {counts.begin(), counts.end()};
}

SimulationReport simulate(const DrawerAssignment& a, const Strategy& strategy, bool allow_abstain) {
  SimulationReport report;
  const auto plan = spy_plan(a, strategy, allow_abstain);
  report.swap_made = plan.swap;
  report.message = plan.message;
  const auto post = apply_plan(a, plan);
  const PrisonerContext ctx(post, strategy);
  if (ctx.message() != plan.message) throw InvariantViolation("post-swap drawers do not decode to the plan");
  report.per_prisoner_opens.reserve(a.size());
  report.all_succeeded = true;
  for (Elem i = 1; i <= a.size(); ++i) {
    const auto res = ctx.run(i);
    report.per_prisoner_opens.push_back(res.opens);
    report.max_opens = std::max(report.max_opens, res.opens);
    report.all_succeeded = report.all_succeeded && res.success;
  }
  return report;
}

std::string report_json(const SimulationReport& report, std::size_t trial) {
  nlohmann::ordered_json j;
  j["trial"] = trial;
  if (report.swap_made) {
    j["swap"] = {report.swap_made->a(), report.swap_made->b()};
  } else {
    j["swap"] = nullptr;
  }
  j["message"] = report.message;
  j["max_opens"] = report.max_opens;
  auto hist = nlohmann::ordered_json::array();
  for (const auto& [opens, count] : report.histogram()) hist.push_back({opens, count});
  j["histogram"] = hist;
  j["all_succeeded"] = report.all_succeeded;
  return j.dump();
}

}  // namespace spyswap
