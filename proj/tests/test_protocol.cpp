#include <gtest/gtest.h>

#include <algorithm>

#include "spyswap/error.hpp"
#include "spyswap/protocol.hpp"
#include "spyswap/rng.hpp"

using namespace spyswap;

namespace {

const Strategy& small_strategy() {
  static const Strategy s = [] {
    ParamRequest req;
    req.n = 500;
    req.seed = 77;
    return build_strategy(resolve_params(req));
  }();
  return s;
}

DrawerAssignment full_cycle(std::size_t n) {
  std::vector<Elem> m(n);
  for (std::size_t i = 0; i < n; ++i) m[i] = static_cast<Elem>((i + 1) % n + 1);
  return {Permutation(m)};
}

// Independent prisoner: scans the prefix, renumbers the rest by counting, and walks.
std::size_t oracle_opens(const DrawerAssignment& post, Elem prisoner, const Strategy& s) {
  const auto& p = s.params;
  const auto m = post.contents.mapping();
  for (std::size_t i = 0; i < p.r; ++i)
    if (m[i] == prisoner) return i + 1;
  std::vector<bool> in_prefix(p.n + 1, false);
  for (std::size_t i = 0; i < p.r; ++i) in_prefix[m[i]] = true;
  auto h = [&](Elem v) {
    Elem rank = 0;
    for (Elem w = 1; w <= v; ++w) rank += !in_prefix[w];
    return rank;
  };
  std::vector<std::int64_t> prefix(m.begin(), m.begin() + static_cast<std::ptrdiff_t>(p.r));
  const auto message = decode_message(pattern(prefix), p.codec);
  const auto beta = member_to_permutation(s.family.member(message), p.n - p.r);
  std::size_t opens = p.r;
  Elem x = h(prisoner);
  for (;;) {
    const Elem found = m[p.r + beta(x) - 1];
    ++opens;
    if (found == prisoner) return opens;
    x = h(found);
  }
}

}  // namespace

TEST(Protocol, PrefixPattern) {
  std::vector<Elem> m{80, 90, 48, 17, 62, 39};
  for (Elem v = 1; v <= 100; ++v)
    if (std::find(m.begin(), m.end(), v) == m.end()) m.push_back(v);
  const DrawerAssignment a{Permutation(m)};
  EXPECT_EQ(derive_prefix_pattern(a, 6), Permutation({5, 6, 3, 1, 4, 2}));
  EXPECT_TRUE(derive_prefix_pattern({Permutation::identity(20)}, 12).is_identity());
  EXPECT_THROW(derive_prefix_pattern(a, 100), InvalidInput);
}

TEST(Protocol, SigmaHandExample) {
  const DrawerAssignment a{Permutation({4, 2, 5, 1, 3})};
  EXPECT_EQ(derive_sigma(a, 2), Permutation({3, 1, 2}));
  EXPECT_TRUE(derive_sigma({Permutation::identity(9)}, 4).is_identity());
}

TEST(Protocol, SwapsOnEitherSideLeaveTheOtherViewAlone) {
  auto rng = substream(1, 1);
  for (int t = 0; t < 50; ++t) {
    const DrawerAssignment a{random_permutation(60, rng)};
    const DrawerAssignment pre{apply_transposition(a.contents, Transposition(3, 11), SwapSide::position)};
    EXPECT_EQ(derive_sigma(pre, 12), derive_sigma(a, 12));
    const DrawerAssignment suf{apply_transposition(a.contents, Transposition(20, 41), SwapSide::position)};
    EXPECT_EQ(derive_prefix_pattern(suf, 12), derive_prefix_pattern(a, 12));
  }
}

TEST(Protocol, ResolveDefaults) {
  ParamRequest req;
  req.n = 500;
  const auto p = resolve_params(req);
  EXPECT_EQ(p.r, 96u);
  EXPECT_DOUBLE_EQ(p.u, 2.75);
  EXPECT_EQ(p.k, 147u);
  EXPECT_LT(p.budget(), 250u);
  req.u = 1.0;
  EXPECT_THROW(resolve_params(req), ParameterError);
  req.u = 2.0;
  req.r = 12;
  req.levels = std::vector<std::uint64_t>{8, 8};
  EXPECT_THROW(resolve_params(req), ParameterError);
  req.n = 8;
  EXPECT_THROW(resolve_params(req), InvalidInput);
}

TEST(Protocol, SpyPlanProperties) {
  const auto& s = small_strategy();
  auto rng = substream(5, 0);
  for (int t = 0; t < 1000; ++t) {
    const DrawerAssignment a{random_permutation(s.params.n, rng)};
    const auto plan = spy_plan(a, s);
    ASSERT_TRUE(plan.swap.has_value());
    EXPECT_LE(plan.swap->b(), s.params.r);
    const auto post = apply_plan(a, plan);
    EXPECT_EQ(decode_message(derive_prefix_pattern(post, s.params.r), s.params.codec), plan.message);
    EXPECT_EQ(plan.message, select_breaker(derive_sigma(a, s.params.r), s.family, s.params.k));
    // both drawers changed, nothing else
    std::size_t diff = 0;
    for (std::size_t i = 0; i < s.params.n; ++i) diff += a.contents.mapping()[i] != post.contents.mapping()[i];
    EXPECT_EQ(diff, 2u);
  }
}

TEST(Protocol, AbstainWhenAlreadyEncoded) {
  const auto& s = small_strategy();
  auto rng = substream(6, 0);
  const DrawerAssignment a{random_permutation(s.params.n, rng)};
  const auto post = apply_plan(a, spy_plan(a, s));
  const auto again = spy_plan(post, s, true);
  EXPECT_FALSE(again.swap.has_value());
  const auto report = simulate(post, s, true);
  EXPECT_FALSE(report.swap_made.has_value());
  EXPECT_TRUE(report.all_succeeded);
  const auto forced = simulate(post, s, false);
  EXPECT_TRUE(forced.swap_made.has_value());
  EXPECT_TRUE(forced.all_succeeded);
}

TEST(Protocol, PrisonersMatchIndependentOracle) {
  const auto& s = small_strategy();
  auto rng = substream(8, 0);
  for (int t = 0; t < 5; ++t) {
    const DrawerAssignment a{t == 0 ? full_cycle(s.params.n).contents : random_permutation(s.params.n, rng)};
    const auto report = simulate(a, s);
    const auto post = apply_plan(a, SpyPlan{report.swap_made, report.message});
    const auto sigma = derive_sigma(post, s.params.r);
    const auto beta = member_to_permutation(s.family.member(report.message), s.params.n - s.params.r);
    const auto walk = compose(sigma, beta);
    for (Elem i = 1; i <= s.params.n; i += 7) {
      EXPECT_EQ(report.per_prisoner_opens[i - 1], oracle_opens(post, i, s)) << i;
      EXPECT_EQ(prisoner_run(post, i, s).opens, report.per_prisoner_opens[i - 1]);
    }
    // suffix prisoners walk exactly their cycle of sigma o beta
    std::vector<Elem> rank(s.params.n + 1, 0);
    for (std::size_t j = s.params.r; j < s.params.n; ++j)
      rank[post.contents.mapping()[j]] = sigma(static_cast<Elem>(j - s.params.r + 1));
    for (Elem i = 1; i <= s.params.n; ++i) {
      if (rank[i] == 0) continue;
      EXPECT_EQ(report.per_prisoner_opens[i - 1], s.params.r + cycle_length_of(walk, rank[i]));
    }
    EXPECT_TRUE(report.all_succeeded);
    EXPECT_LE(report.max_opens, s.params.budget());
  }
}

TEST(Protocol, IdentityAndEdgeCases) {
  const auto& s = small_strategy();
  const DrawerAssignment id{Permutation::identity(s.params.n)};
  const auto report = simulate(id, s);
  EXPECT_TRUE(report.all_succeeded);
  const auto post = apply_plan(id, SpyPlan{report.swap_made, report.message});
  EXPECT_EQ(prisoner_run(post, post.contents(1), s).opens, 1u);
  for (Elem i = 1; i <= s.params.n; ++i) {
    const auto res = prisoner_run(post, i, s);
    EXPECT_TRUE(res.success);
    EXPECT_GE(res.opens, 1u);
    if (i > s.params.r) EXPECT_LE(res.opens, s.params.r + 2);
  }
  EXPECT_THROW(prisoner_run(post, 0, s), InvalidInput);
  EXPECT_THROW(prisoner_run(post, static_cast<Elem>(s.params.n + 1), s), InvalidInput);
  EXPECT_THROW(simulate({Permutation::identity(10)}, s), DimensionError);
}

TEST(Protocol, ReportJson) {
  SimulationReport r;
  r.swap_made = Transposition(2, 9);
  r.message = 5;
  r.per_prisoner_opens = {1, 3, 3, 2};
  r.max_opens = 3;
  r.all_succeeded = true;
  EXPECT_EQ(report_json(r, 4),
            R"({"trial":4,"swap":[2,9],"message":5,"max_opens":3,"histogram":[[1,1],[2,1],[3,2]],"all_succeeded":true})");
  r.swap_made.reset();
  EXPECT_NE(report_json(r, 0).find(R"("swap":null)"), std::string::npos);
}
