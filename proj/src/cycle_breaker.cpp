#include "spyswap/cycle_breaker.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>

#include "spyswap/error.hpp"
#include "spyswap/swap_codec.hpp"

namespace spyswap {

namespace {

constexpr std::uint64_t kSaturated = std::numeric_limits<std::uint64_t>::max();

std::uint64_t saturating_degree(long double bound, bool strictly_above) {
  if (!(bound < 1e18L)) return kSaturated;
  const auto floor_bound = static_cast<std::uint64_t>(std::floor(bound));
  // degree = p + 1 with p >= bound (or p > bound).
  const std::uint64_t p_min =
      strictly_above ? floor_bound + 1 : static_cast<std::uint64_t>(std::ceil(bound));
  return p_min + 1;
}

std::uint64_t smallest_lps_prime(std::uint64_t degree_needed) {
  std::uint64_t p = std::max<std::uint64_t>(5, degree_needed - 1);
  while (p % 4 != 1 || !is_prime(p)) ++p;
  return p;
}

}  // namespace

std::vector<std::uint64_t> strict_degrees(double u, unsigned tau) {
  const long double uu = u;
  std::vector<std::uint64_t> d;
  d.push_back(saturating_degree(256.0L * uu * uu, false));
  for (unsigned t = 1; t <= tau; ++t) {
    const long double base = 16.0L * uu * uu;
    const long double bound = 16.0L * std::pow(base, std::ldexp(1.0L, static_cast<int>(t)));
    d.push_back(saturating_degree(bound, true));
  }
  return d;
}

BreakerParams BreakerParams::make(std::size_t n_elems, double u, GraphMode mode,
                                  std::vector<std::uint64_t> degrees) {
  if (!(u >= 1.0) || !std::isfinite(u)) throw InvalidInput("u must be a finite real >= 1");
  BreakerParams bp;
  bp.n_elems = n_elems;
  bp.u = u;
  bp.mode = mode;
  bp.k = static_cast<std::size_t>(std::ceil(static_cast<double>(n_elems) / u - 1e-12));
  bp.arc_cap = static_cast<std::size_t>(std::floor(static_cast<double>(n_elems) / (4.0 * u) + 1e-12));
  bp.tau = 1;
  while (static_cast<double>(std::size_t{1} << bp.tau) < 2.0 * u) ++bp.tau;
  if (bp.arc_cap < 1) {
    throw ParameterError("arc cap n/(4u) < 1 for n=" + std::to_string(n_elems) + ", u=" + std::to_string(u));
  }
  if (bp.k < 2) throw ParameterError("cycle bound k < 2");
  if (mode == GraphMode::strict) {
    if (!degrees.empty()) throw InvalidInput("strict mode derives its own degrees");
    bp.degrees = strict_degrees(u, bp.tau);
  } else if (degrees.empty()) {
    bp.degrees.assign(bp.tau + 1, 2);
    bp.degrees[0] = 4;
  } else {
    if (degrees.size() != bp.tau + 1) {
      throw InvalidInput("expected " + std::to_string(bp.tau + 1) + " degrees (base + one per level)");
    }
    bp.degrees = std::move(degrees);
  }
  return bp;
}

TranspositionBase build_base(const BreakerParams& params, GraphProvider& provider) {
  const std::size_t n = params.n_elems;
  const std::uint64_t degree = params.degrees.at(0);
  if (degree == kSaturated) throw CapabilityError("base degree out of range");
  std::size_t n_needed = n;
  if (params.mode == GraphMode::empirical && (n * degree) % 2 != 0) ++n_needed;
  auto graph = std::make_shared<const RegularGraph>(provider(n_needed, static_cast<std::size_t>(degree)));
  TranspositionBase base;
  base.source_graph = graph;
  for (const auto& e : graph->edges()) {
    if (e.u == e.v || e.u >= n || e.v >= n) continue;
    base.transpositions.emplace_back(e.u + 1, e.v + 1);
  }
  return base;
}

std::vector<Arc> partition_arcs(std::span<const Elem> cycle, std::size_t arc_cap, ArcCount mode) {
  if (arc_cap < 1) throw InvalidInput("arc_cap must be >= 1");
  const std::size_t len = cycle.size();
  if (len == 0) return {};
  std::size_t t = (len + arc_cap - 1) / arc_cap;
  std::vector<std::size_t> sizes;
  if (mode == ArcCount::odd) {
    if (t % 2 == 0 && t < len) ++t;
    sizes.assign(t, len / t);
    for (std::size_t i = 0; i < len % t; ++i) ++sizes[i];
  } else {
    sizes.assign(t, arc_cap);
    const std::size_t rem = len % arc_cap;
    if (rem != 0) sizes[(t - 1) / 2] = rem;
  }
  std::vector<Arc> arcs;
  arcs.reserve(t);
  std::size_t offset = 0;
  for (auto s : sizes) {
    arcs.emplace_back(cycle.begin() + static_cast<std::ptrdiff_t>(offset),
                      cycle.begin() + static_cast<std::ptrdiff_t>(offset + s));
    offset += s;
  }
  return arcs;
}

namespace {

struct ArcLabel {
  std::uint32_t pair_group = 0;  // offset of this cycle's first pair
  std::uint32_t arc = 0;
  std::uint32_t arcs = 0;  // 0: element not in an oversized cycle
};

// Labels every element of an oversized cycle with its arc; returns the number of pairs.
std::size_t label_arcs(const Permutation& pi, const BreakerParams& params, ArcCount mode,
                       std::vector<ArcLabel>& labels) {
  if (pi.size() != params.n_elems) throw DimensionError("permutation size != n_elems");
  labels.assign(pi.size() + 1, ArcLabel{});
  std::size_t pairs = 0;
  for (const auto& cycle : cycle_decompose(pi).cycles) {
    if (cycle.size() <= params.k) continue;
    const auto arcs = partition_arcs(cycle, params.arc_cap, mode);
    for (std::size_t i = 0; i < arcs.size(); ++i) {
      for (Elem x : arcs[i]) {
        labels[x] = ArcLabel{static_cast<std::uint32_t>(pairs), static_cast<std::uint32_t>(i),
                             static_cast<std::uint32_t>(arcs.size())};
      }
    }
    pairs += arcs.size() / 2;
  }
  return pairs;
}

// Pair slot of a base transposition, or -1 when it does not join reflected arcs.
long pair_slot(const std::vector<ArcLabel>& labels, const Transposition& t) {
  const auto& la = labels[t.a()];
  const auto& lb = labels[t.b()];
  if (la.arcs == 0 || lb.arcs == 0 || la.pair_group != lb.pair_group) return -1;
  if (la.arc == lb.arc || la.arc + lb.arc + 1 != la.arcs) return -1;
  return static_cast<long>(la.pair_group + std::min(la.arc, lb.arc));
}

void check_base(const TranspositionBase& base, const BreakerParams& params) {
  for (const auto& t : base.transpositions) {
    if (t.b() > params.n_elems) throw InvalidInput("base transposition outside 1..n_elems");
  }
}

}  // namespace

std::vector<Transposition> break_cycles(const Permutation& pi, const TranspositionBase& base,
                                        const BreakerParams& params, ArcCount mode) {
  check_base(base, params);
  std::vector<ArcLabel> labels;
  const std::size_t pairs = label_arcs(pi, params, mode, labels);
  std::vector<std::optional<Transposition>> chosen(pairs);
  for (const auto& t : base.transpositions) {
    const long slot = pair_slot(labels, t);
    if (slot < 0) continue;
    auto& c = chosen[static_cast<std::size_t>(slot)];
    if (!c || t < *c) c = t;
  }
  std::vector<Transposition> out;
  out.reserve(pairs);
  for (std::size_t i = 0; i < pairs; ++i) {
    if (!chosen[i]) {
      throw CoverageError("no base edge joins arc pair " + std::to_string(i) + " (longest cycle " +
                          std::to_string(longest_cycle(pi)) + ")");
    }
    out.push_back(*chosen[i]);
  }
  return out;
}

std::vector<std::vector<Transposition>> w_sets(const Permutation& pi, const TranspositionBase& base,
                                               const BreakerParams& params, ArcCount mode) {
  check_base(base, params);
  std::vector<ArcLabel> labels;
  const std::size_t pairs = label_arcs(pi, params, mode, labels);
  std::vector<std::vector<Transposition>> sets(pairs);
  for (const auto& t : base.transpositions) {
    const long slot = pair_slot(labels, t);
    if (slot >= 0) sets[static_cast<std::size_t>(slot)].push_back(t);
  }
  for (std::size_t i = 0; i < pairs; ++i) {
    if (sets[i].empty()) throw CoverageError("no base edge joins arc pair " + std::to_string(i));
  }
  return sets;
}

BreakerFamily::BreakerFamily(std::size_t n_elems, unsigned tau, std::vector<Slot> slots)
    : n_elems_(n_elems), tau_(tau), slots_(std::move(slots)) {
  if (slots_.size() % width() != 0) throw InvalidInput("family slots not a multiple of 2^tau");
  for (const auto& s : slots_) {
    if (s && s->b() > n_elems_) throw InvalidInput("family transposition outside 1..n_elems");
  }
}

std::uint64_t family_count(std::uint64_t base_items, std::span<const std::uint64_t> level_degrees) {
  std::uint64_t items = base_items;
  for (auto d : level_degrees) {
    const std::uint64_t vertices = items + ((items * d) % 2);
    if (d >= vertices) {
      throw ParameterError("level degree " + std::to_string(d) + " impossible over " +
                           std::to_string(vertices) + " items");
    }
    items = vertices * d / 2;
  }
  return items;
}

std::vector<std::uint64_t> fit_level_degrees(std::uint64_t base_items, unsigned tau,
                                             std::uint64_t capacity, std::uint64_t max_degree) {
  std::vector<std::uint64_t> degrees(tau, 1);
  std::uint64_t items = base_items;
  for (unsigned t = 0; t < tau; ++t) {
    for (std::uint64_t d = max_degree; d >= 1; --d) {
      degrees[t] = d;
      const std::uint64_t vertices = items + ((items * d) % 2);
      if (d >= vertices) continue;
      std::vector<std::uint64_t> trial(degrees.begin(), degrees.begin() + t + 1);
      // Remaining levels at degree 1 only shrink the count.
      trial.resize(tau, 1);
      std::uint64_t count = 0;
      try {
        count = family_count(base_items, trial);
      } catch (const ParameterError&) {
        continue;
      }
      if (count <= capacity) break;
      if (d == 1) {
        throw ParameterError("family of " + std::to_string(count) + " members exceeds capacity " +
                             std::to_string(capacity) + "; need r >= " +
                             std::to_string(prefix_length_for(count)));
      }
    }
    const std::uint64_t vertices = items + ((items * degrees[t]) % 2);
    items = vertices * degrees[t] / 2;
  }
  return degrees;
}

std::size_t prefix_length_for(std::uint64_t count) {
  for (std::size_t r = 12;; r += 3) {
    if (CodecParams::for_prefix(r).m >= count) return r;
  }
}

BreakerFamily build_family(const TranspositionBase& base, const BreakerParams& params,
                           GraphProvider& provider, const FamilyOptions& options) {
  if (params.degrees.size() != params.tau + 1) throw InvalidInput("degree list does not match tau");
  check_base(base, params);
  // Level 0: one transposition per item.
  std::vector<Slot> items(base.transpositions.begin(), base.transpositions.end());
  std::size_t width = 1;
  for (unsigned t = 1; t <= params.tau; ++t) {
    const std::size_t count = items.size() / width;
    const std::uint64_t d = params.degrees[t];
    if (d == kSaturated) throw CapabilityError("level " + std::to_string(t) + " degree overflows");
    std::vector<Slot> next;
    std::vector<Edge> edges;
    if (params.mode == GraphMode::strict) {
      auto g = provider(count, static_cast<std::size_t>(d));
      for (const auto& e : g.edges()) {
        if (e.u < count && e.v < count) edges.push_back(e);
      }
    } else {
      const std::size_t vertices = count + ((count * d) % 2);
      if (vertices * d / 2 * width * 2 > options.max_slots) {
        throw CapabilityError("family level " + std::to_string(t) + " exceeds the slot budget");
      }
      auto g = provider(vertices, static_cast<std::size_t>(d));
      edges.assign(g.edges().begin(), g.edges().end());
    }
    if (edges.size() * width * 2 > options.max_slots) {
      throw CapabilityError("family level " + std::to_string(t) + " exceeds the slot budget");
    }
    next.reserve(edges.size() * width * 2);
    auto append = [&](std::uint32_t v) {
      if (v >= count) {
        next.insert(next.end(), width, Slot{});  // dummy item
      } else {
        next.insert(next.end(), items.begin() + static_cast<std::ptrdiff_t>(v * width),
                    items.begin() + static_cast<std::ptrdiff_t>((v + 1) * width));
      }
    };
    for (const auto& e : edges) {
      append(e.u);
      append(e.v);
    }
    items = std::move(next);
    width *= 2;
  }
  BreakerFamily family(params.n_elems, params.tau, std::move(items));
  if (options.capacity && family.count() > *options.capacity) {
    throw ParameterError("family of " + std::to_string(family.count()) + " members exceeds codec capacity " +
                         std::to_string(*options.capacity) + "; need r >= " +
                         std::to_string(prefix_length_for(family.count())));
  }
  return family;
}

Permutation member_to_permutation(std::span<const Slot> member, std::size_t n_elems) {
  auto beta = Permutation::identity(n_elems);
  for (const auto& slot : member) {
    if (slot) beta = apply_transposition(beta, *slot, SwapSide::position);
  }
  return beta;
}

CycleIndex::CycleIndex(const Permutation& sigma)
    : cycle_of_(sigma.size() + 1), pos_of_(sigma.size() + 1) {
  cycles_ = cycle_decompose(sigma).cycles;
  len_.reserve(cycles_.size());
  for (std::uint32_t c = 0; c < cycles_.size(); ++c) {
    len_.push_back(static_cast<std::uint32_t>(cycles_[c].size()));
    for (std::uint32_t i = 0; i < cycles_[c].size(); ++i) {
      cycle_of_[cycles_[c][i]] = c;
      pos_of_[cycles_[c][i]] = i;
    }
  }
  by_length_.resize(cycles_.size());
  for (std::uint32_t c = 0; c < by_length_.size(); ++c) by_length_[c] = c;
  std::stable_sort(by_length_.begin(), by_length_.end(),
                   [&](std::uint32_t x, std::uint32_t y) { return len_[x] > len_[y]; });
}

std::size_t CycleIndex::longest_after(std::span<const Slot> member) const {
  // Support of beta, sorted by (cycle, position).
  std::vector<Elem> support;
  support.reserve(member.size() * 2);
  for (const auto& s : member) {
    if (!s) continue;
    if (s->b() >= cycle_of_.size()) throw InvalidInput("member transposition out of range");
    support.push_back(s->a());
    support.push_back(s->b());
  }
  if (support.empty()) return longest();
  auto order = [&](Elem x, Elem y) {
    return std::pair(cycle_of_[x], pos_of_[x]) < std::pair(cycle_of_[y], pos_of_[y]);
  };
  std::sort(support.begin(), support.end(), order);
  support.erase(std::unique(support.begin(), support.end()), support.end());
  const std::size_t m = support.size();
  auto index_of = [&](Elem x) {
    return static_cast<std::size_t>(std::lower_bound(support.begin(), support.end(), x, order) - support.begin());
  };

  // First-return map of sigma o beta on the support.
  std::vector<std::size_t> next(m);
  std::vector<std::size_t> weight(m);
  for (std::size_t i = 0; i < m; ++i) {
    Elem y = support[i];
    for (auto it = member.rbegin(); it != member.rend(); ++it) {
      if (*it) y = (**it)(y);
    }
    const std::uint32_t c = cycle_of_[y];
    const std::uint32_t len = len_[c];
    const std::uint32_t pz = (pos_of_[y] + 1) % len;
    // Support points of cycle c occupy a contiguous run; find the first at position >= pz.
    const std::size_t run_begin = index_of(cycles_[c][0]);
    std::size_t run_end = run_begin;
    while (run_end < m && cycle_of_[support[run_end]] == c) ++run_end;
    std::size_t target = run_begin;
    for (std::size_t j = run_begin; j < run_end; ++j) {
      if (pos_of_[support[j]] >= pz) {
        target = j;
        break;
      }
    }
    next[i] = target;
    weight[i] = 1 + (pos_of_[support[target]] + len - pz) % len;
  }
  std::size_t best = 0;
  std::vector<bool> seen(m, false);
  for (std::size_t i = 0; i < m; ++i) {
    if (seen[i]) continue;
    std::size_t total = 0;
    for (std::size_t j = i; !seen[j]; j = next[j]) {
      seen[j] = true;
      total += weight[j];
    }
    best = std::max(best, total);
  }
  for (auto c : by_length_) {
    if (len_[c] <= best) break;
    bool touched = false;
    for (std::size_t j = 0; j < m && !touched; ++j) touched = cycle_of_[support[j]] == c;
    if (!touched) {
      best = len_[c];
      break;
    }
  }
  return best;
}

std::uint64_t select_breaker(const Permutation& sigma, const BreakerFamily& family, std::size_t k) {
  if (sigma.size() != family.n_elems()) throw DimensionError("sigma size != family n_elems");
  const CycleIndex index(sigma);
  for (std::size_t i = 0; i < family.count(); ++i) {
    if (index.longest_after(family.member(i)) <= k) return i;
  }
  std::ostringstream os;
  os << "no breaker among " << family.count() << " members brings sigma to cycles <= " << k
     << "; cycle type of sigma:";
  const auto type = cycle_decompose(sigma).cycle_type();
  for (std::size_t i = 0; i < type.size() && i < 12; ++i) os << ' ' << type[i];
  if (type.size() > 12) os << " ...";
  throw CoverageError(os.str());
}

long double strict_family_size_bound(std::size_t n_elems, double u) {
  const auto params = BreakerParams::make(n_elems, u, GraphMode::strict);
  long double total = static_cast<long double>(n_elems);
  for (auto d : params.degrees) {
    if (d == kSaturated) return std::numeric_limits<long double>::infinity();
    total *= static_cast<long double>(smallest_lps_prime(d) + 1) / 2.0L;
  }
  return total;
}

long double family_size_limit(std::size_t n_elems, double u) {
  return 8.0L * static_cast<long double>(n_elems) * std::pow(4.0L * u, 16.0L * u + 4.0L);
}

void write_family(std::ostream& out, const BreakerFamily& family) {
  out << family.n_elems() << ' ' << family.tau() << ' ' << family.count() << '\n';
  for (std::size_t i = 0; i < family.count(); ++i) {
    bool first = true;
    for (const auto& s : family.member(i)) {
      if (!first) out << ' ';
      first = false;
      if (s) {
        out << s->a() << ':' << s->b();
      } else {
        out << "0:0";
      }
    }
    out << '\n';
  }
}

BreakerFamily read_family(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw ParseError("family: missing header");
  std::istringstream hs(line);
  std::size_t n = 0, count = 0;
  unsigned tau = 0;
  if (!(hs >> n >> tau >> count) || tau > 30) throw ParseError("family: bad header '" + line + "'");
  const std::size_t width = std::size_t{1} << tau;
  std::vector<Slot> slots;
  slots.reserve(count * width);
  for (std::size_t i = 0; i < count; ++i) {
    if (!std::getline(in, line)) throw ParseError("family: expected " + std::to_string(count) + " members");
    std::istringstream ms(line);
    std::string token;
    std::size_t seen = 0;
    while (ms >> token) {
      const auto colon = token.find(':');
      if (colon == std::string::npos) throw ParseError("family: bad pair '" + token + "'");
      unsigned long a = 0, b = 0;
      try {
        a = std::stoul(token.substr(0, colon));
        b = std::stoul(token.substr(colon + 1));
      } catch (const std::exception&) {
        throw ParseError("family: bad pair '" + token + "'");
      }
      if (a == 0 && b == 0) {
        slots.emplace_back();
      } else {
        try {
          slots.emplace_back(Transposition(static_cast<Elem>(a), static_cast<Elem>(b)));
        } catch (const InvalidInput& e) {
          throw ParseError(std::string("family: ") + e.what());
        }
      }
      ++seen;
    }
    if (seen != width) throw ParseError("family: member " + std::to_string(i) + " has wrong width");
  }
  try {
    return BreakerFamily(n, tau, std::move(slots));
  } catch (const InvalidInput& e) {
    throw ParseError(std::string("family: ") + e.what());
  }
}

}  // namespace spyswap
