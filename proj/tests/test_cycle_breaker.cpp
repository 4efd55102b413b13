#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "spyswap/cycle_breaker.hpp"
#include "spyswap/error.hpp"
#include "spyswap/rng.hpp"

using namespace spyswap;

namespace {

Permutation full_cycle(std::size_t n) {
  std::vector<Elem> m(n);
  for (std::size_t i = 0; i < n; ++i) m[i] = static_cast<Elem>((i + 1) % n + 1);
  return Permutation(m);
}

TranspositionBase complete_base(std::size_t n) {
  TranspositionBase b;
  for (Elem i = 1; i <= n; ++i)
    for (Elem j = i + 1; j <= n; ++j) b.transpositions.emplace_back(i, j);
  return b;
}

bool pairwise_disjoint(const std::vector<Transposition>& ts) {
  std::set<Elem> seen;
  for (const auto& t : ts) {
    if (!seen.insert(t.a()).second || !seen.insert(t.b()).second) return false;
  }
  return true;
}

std::size_t longest_after_naive(const Permutation& sigma, std::span<const Slot> member) {
  return longest_cycle(compose(sigma, member_to_permutation(member, sigma.size())));
}

}  // namespace

TEST(CycleBreaker, ParamsFollowU) {
  auto p = BreakerParams::make(120, 2.0, GraphMode::empirical);
  EXPECT_EQ(p.k, 60u);
  EXPECT_EQ(p.arc_cap, 15u);
  EXPECT_EQ(p.tau, 2u);
  EXPECT_EQ(p.degrees, (std::vector<std::uint64_t>{4, 2, 2}));
  p = BreakerParams::make(404, 2.75, GraphMode::empirical);
  EXPECT_EQ(p.k, 147u);
  EXPECT_EQ(p.tau, 3u);
  EXPECT_THROW(BreakerParams::make(10, 3.0, GraphMode::empirical), ParameterError);
  EXPECT_THROW(BreakerParams::make(100, 0.5, GraphMode::empirical), InvalidInput);
  EXPECT_THROW(BreakerParams::make(100, 2.0, GraphMode::empirical, {4, 2}), InvalidInput);
}

TEST(CycleBreaker, StrictDegrees) {
  const auto d = strict_degrees(1.0, 1);
  ASSERT_EQ(d.size(), 2u);
  EXPECT_EQ(d[0], 257u);   // p0 >= 256
  EXPECT_EQ(d[1], 4098u);  // p1 > 16 * 16^2
  const auto big = strict_degrees(4.0, 3);
  EXPECT_EQ(big.back(), std::numeric_limits<std::uint64_t>::max());
}

TEST(CycleBreaker, ArcPartitions) {
  std::vector<Elem> cyc(10);
  for (Elem i = 0; i < 10; ++i) cyc[i] = i + 1;
  auto arcs = partition_arcs(cyc, 3, ArcCount::odd);  // ceil(10/3) = 4 -> 5 arcs of 2
  ASSERT_EQ(arcs.size(), 5u);
  for (const auto& a : arcs) EXPECT_EQ(a.size(), 2u);
  arcs = partition_arcs(cyc, 4, ArcCount::odd);  // 3 arcs: 4, 3, 3
  ASSERT_EQ(arcs.size(), 3u);
  EXPECT_EQ(arcs[0], (Arc{1, 2, 3, 4}));
  EXPECT_EQ(arcs[2], (Arc{8, 9, 10}));
  arcs = partition_arcs(cyc, 4, ArcCount::natural);  // 4, 2, 4
  ASSERT_EQ(arcs.size(), 3u);
  EXPECT_EQ(arcs[1], (Arc{5, 6}));
  arcs = partition_arcs(std::span<const Elem>(cyc).first(6), 1, ArcCount::odd);
  EXPECT_EQ(arcs.size(), 6u);
}

TEST(CycleBreaker, SixEqualArcsGiveFourCycles) {
  const auto params = BreakerParams::make(6, 1.5, GraphMode::empirical);
  ASSERT_EQ(params.arc_cap, 1u);
  const auto sigma = full_cycle(6);
  const auto ts = break_cycles(sigma, complete_base(6), params, ArcCount::natural);
  ASSERT_EQ(ts.size(), 3u);
  EXPECT_EQ(ts[0], Transposition(1, 6));
  EXPECT_EQ(ts[1], Transposition(2, 5));
  EXPECT_EQ(ts[2], Transposition(3, 4));
  std::vector<Slot> slots(ts.begin(), ts.end());
  const auto after = compose(sigma, member_to_permutation(slots, 6));
  EXPECT_EQ(cycle_decompose(after).cycles.size(), 4u);
}

TEST(CycleBreaker, FullCycleOnEmpiricalBase) {
  for (std::size_t n : {120u, 500u}) {
    auto params = BreakerParams::make(n, 2.0, GraphMode::empirical, {32, 2, 2});
    ProviderOptions o;
    o.seed = 17;
    GraphProvider provider(o);
    const auto base = build_base(params, provider);
    EXPECT_EQ(base.size(), n * 16);
    const auto sigma = full_cycle(n);
    const auto ts = break_cycles(sigma, base, params);
    EXPECT_LE(ts.size(), 4u);
    EXPECT_TRUE(pairwise_disjoint(ts));
    std::vector<Slot> slots(ts.begin(), ts.end());
    EXPECT_LE(longest_cycle(compose(sigma, member_to_permutation(slots, n))), n / 2);

    const auto sets = w_sets(sigma, base, params);
    ASSERT_EQ(sets.size(), ts.size());
    for (std::size_t i = 0; i < sets.size(); ++i) {
      EXPECT_TRUE(std::ranges::find(sets[i], ts[i]) != sets[i].end());
      EXPECT_EQ(*std::ranges::min_element(sets[i]), ts[i]);
    }
  }
}

TEST(CycleBreaker, MissingPairIsACoverageFailure) {
  const auto params = BreakerParams::make(8, 2.0, GraphMode::empirical);
  TranspositionBase base;
  base.transpositions.emplace_back(1, 2);
  EXPECT_THROW(break_cycles(full_cycle(8), base, params), CoverageError);
  EXPECT_TRUE(break_cycles(Permutation::identity(8), base, params).empty());
}

TEST(CycleBreaker, CompressedLongestMatchesNaive) {
  auto rng = substream(21, 0);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = 5 + rng.bounded(200);
    const auto sigma = rng.bounded(4) == 0 ? full_cycle(n) : random_permutation(n, rng);
    const CycleIndex index(sigma);
    EXPECT_EQ(index.longest(), longest_cycle(sigma));
    std::vector<Slot> member(8);
    for (auto& s : member) {
      if (rng.bounded(5) == 0) continue;  // padding
      const Elem a = static_cast<Elem>(1 + rng.bounded(n));
      Elem b = static_cast<Elem>(1 + rng.bounded(n));
      if (a == b) b = a % n + 1;
      s = Transposition(a, b);
    }
    EXPECT_EQ(index.longest_after(member), longest_after_naive(sigma, member)) << trial;
  }
}

TEST(CycleBreaker, FamilyCounting) {
  const std::vector<std::uint64_t> two{2};
  EXPECT_EQ(family_count(10, two), 10u);
  const std::vector<std::uint64_t> one{1};
  EXPECT_EQ(family_count(5, one), 3u);  // padded to 6 items
  const std::vector<std::uint64_t> levels{2, 1, 1};
  EXPECT_EQ(family_count(808, levels), 202u);
  const std::vector<std::uint64_t> bad{3};
  EXPECT_THROW(family_count(2, bad), ParameterError);

  const auto fitted = fit_level_degrees(808, 3, 256);
  EXPECT_LE(family_count(808, fitted), 256u);
  EXPECT_THROW(fit_level_degrees(5000, 3, 256), ParameterError);

  EXPECT_EQ(prefix_length_for(1), 12u);
  EXPECT_EQ(prefix_length_for(4), 12u);
  EXPECT_EQ(prefix_length_for(5), 24u);
  EXPECT_EQ(prefix_length_for(256), 96u);
  EXPECT_EQ(prefix_length_for(257), 192u);
}

TEST(CycleBreaker, FamilyUnfoldsBaseItems) {
  auto params = BreakerParams::make(60, 2.0, GraphMode::empirical, {4, 3, 1});
  ProviderOptions o;
  o.seed = 8;
  GraphProvider provider(o);
  const auto base = build_base(params, provider);
  const auto family = build_family(base, params, provider);
  const std::vector<std::uint64_t> levels{3, 1};
  EXPECT_EQ(family.count(), family_count(base.size(), levels));
  EXPECT_EQ(family.width(), 4u);
  const std::set<Transposition> base_set(base.transpositions.begin(), base.transpositions.end());
  for (std::size_t i = 0; i < family.count(); ++i) {
    for (const auto& s : family.member(i)) {
      if (s) EXPECT_TRUE(base_set.count(*s));
    }
  }
  FamilyOptions tight;
  tight.capacity = 4;
  GraphProvider again(o);
  (void)build_base(params, again);
  EXPECT_THROW(build_family(base, params, again, tight), ParameterError);

  std::stringstream io;
  write_family(io, family);
  const auto back = read_family(io);
  ASSERT_EQ(back.count(), family.count());
  for (std::size_t i = 0; i < family.count(); ++i) {
    EXPECT_TRUE(std::ranges::equal(back.member(i), family.member(i)));
  }
  std::istringstream bad("4 1 1\n1:2\n");
  EXPECT_THROW(read_family(bad), ParseError);
}

TEST(CycleBreaker, SelectBreakerIsFirstQualifyingMember) {
  auto params = BreakerParams::make(120, 2.0, GraphMode::empirical, {4, 4, 2});
  ProviderOptions o;
  o.seed = 3;
  GraphProvider provider(o);
  const auto base = build_base(params, provider);
  const auto family = build_family(base, params, provider);
  auto rng = substream(3, 99);
  int covered = 0;
  for (int trial = 0; trial < 40; ++trial) {
    const auto sigma = trial == 0 ? full_cycle(120) : random_permutation(120, rng);
    std::optional<std::uint64_t> want;
    for (std::size_t i = 0; i < family.count() && !want; ++i) {
      if (longest_after_naive(sigma, family.member(i)) <= params.k) want = i;
    }
    if (want) {
      EXPECT_EQ(select_breaker(sigma, family, params.k), *want);
      ++covered;
    } else {
      EXPECT_THROW(select_breaker(sigma, family, params.k), CoverageError);
    }
  }
  EXPECT_GT(covered, 0);
  EXPECT_EQ(select_breaker(Permutation::identity(120), family, params.k), 0u);
}

TEST(CycleBreaker, StrictToyFamilyRespectsSizeBound) {
  // u = 1: one level; base from LPS(257, 5), level graph from LPS(4129, 13).
  const auto params = BreakerParams::make(30, 1.0, GraphMode::strict);
  ASSERT_EQ(params.tau, 1u);
  ProviderOptions o;
  o.mode = GraphMode::strict;
  GraphProvider provider(o);
  const auto base = build_base(params, provider);
  // LPS(269,5) has 60 vertices, smaller than LPS(257,5)
  const auto base_lps = smallest_lps(30, 257);
  EXPECT_EQ(base.source_graph->degree(), base_lps.p + 1);
  const auto level_lps = smallest_lps(base.size(), 4098);
  const auto family = build_family(base, params, provider);
  EXPECT_GT(family.count(), 0u);
  const long double chosen = 30.0L * (base_lps.p + 1) / 2.0L * (level_lps.p + 1) / 2.0L;
  EXPECT_LE(static_cast<long double>(family.count()), chosen);
  EXPECT_LE(chosen, family_size_limit(30, 1.0));
  const long double arithmetic = strict_family_size_bound(30, 1.0);
  EXPECT_DOUBLE_EQ(static_cast<double>(arithmetic), 30.0 * 129.0 * 2065.0);
  EXPECT_LE(arithmetic, family_size_limit(30, 1.0));
}

TEST(CycleBreaker, StrictDeepFamiliesAreOutOfReach) {
  const auto params = BreakerParams::make(100, 2.0, GraphMode::strict);
  ASSERT_EQ(params.tau, 2u);
  EXPECT_GT(strict_family_size_bound(100, 2.0), 1e12L);
  EXPECT_LE(strict_family_size_bound(100, 2.0), family_size_limit(100, 2.0));
  ProviderOptions o;
  o.mode = GraphMode::strict;
  GraphProvider provider(o);
  EXPECT_THROW(
      {
        const auto base = build_base(params, provider);
        (void)build_family(base, params, provider);
      },
      CapabilityError);
}
