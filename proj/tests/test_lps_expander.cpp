#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "spyswap/error.hpp"
#include "spyswap/lps_expander.hpp"
#include "spyswap/rng.hpp"

using namespace spyswap;

namespace {

RegularGraph complete4() {
  return RegularGraph(4, 3, {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}});
}

RegularGraph cycle8() {
  std::vector<Edge> e;
  for (std::uint32_t i = 0; i < 8; ++i) e.push_back({i, (i + 1) % 8});
  return RegularGraph(8, 2, e);
}

const RegularGraph& lps_13_5() {
  static const RegularGraph g = lps_construct(LpsParams::make(13, 5));
  return g;
}

}  // namespace

TEST(Lps, NumberTheory) {
  EXPECT_TRUE(is_prime(2));
  EXPECT_TRUE(is_prime(4129));
  EXPECT_FALSE(is_prime(1));
  EXPECT_FALSE(is_prime(561));
  EXPECT_EQ(legendre(13, 5), -1);  // 13 = 3 mod 5; squares mod 5 are 1, 4
  EXPECT_EQ(legendre(4, 13), 1);
  EXPECT_EQ(legendre(17, 13), 1);
  EXPECT_THROW(legendre(3, 9), InvalidInput);
  EXPECT_THROW(LpsParams::make(7, 5), InvalidInput);
  EXPECT_THROW(LpsParams::make(13, 13), InvalidInput);
  EXPECT_EQ(LpsParams::make(13, 5).vertex_count(), 120u);
  EXPECT_EQ(LpsParams::make(17, 13).vertex_count(), 1092u);
}

TEST(Lps, GeneratorsMatchBruteForce) {
  for (std::uint64_t p : {5u, 13u, 17u, 29u}) {
    using Quad = std::array<std::int64_t, 4>;
    std::set<Quad> want;
    const auto lim = static_cast<std::int64_t>(std::sqrt(static_cast<double>(p))) + 1;
    for (std::int64_t a = 1; a <= lim; a += 2)
      for (std::int64_t b = -lim; b <= lim; ++b)
        for (std::int64_t c = -lim; c <= lim; ++c)
          for (std::int64_t d = -lim; d <= lim; ++d)
            if (b % 2 == 0 && c % 2 == 0 && d % 2 == 0 &&
                a * a + b * b + c * c + d * d == static_cast<std::int64_t>(p))
              want.insert({a, b, c, d});
    const auto got = lps_generators(p);
    EXPECT_EQ(got.size(), p + 1);
    EXPECT_EQ(std::set<Quad>(got.begin(), got.end()), want);
  }
}

TEST(Lps, SmallGraphSpectra) {
  auto c = spectral_check(complete4(), 2.0);
  EXPECT_NEAR(c.second_eigenvalue, 1.0, 1e-9);
  EXPECT_TRUE(c.verified);
  const auto g = cycle8();
  EXPECT_TRUE(g.bipartite());
  c = spectral_check(g, 1.0);
  EXPECT_NEAR(c.second_eigenvalue, std::sqrt(2.0), 1e-9);
  EXPECT_NEAR(c.ramanujan_bound, 2.0, 1e-12);
}

TEST(Lps, RejectsIrregularGraphs) {
  EXPECT_THROW(RegularGraph(3, 2, {{0, 1}, {1, 2}}), InvalidInput);
  EXPECT_THROW(RegularGraph(2, 1, {{0, 2}}), InvalidInput);
  // a loop counts twice
  const RegularGraph loops(2, 3, {{0, 0}, {1, 1}, {0, 1}});
  EXPECT_EQ(loops.adjacency()[0].size(), 3u);
}

TEST(Lps, Lps13_5IsBipartiteRamanujan) {
  const auto& g = lps_13_5();
  EXPECT_EQ(g.n_vertices(), 120u);
  EXPECT_EQ(g.degree(), 14u);
  EXPECT_TRUE(g.bipartite());
  const auto c = spectral_check(g, 13.0);
  EXPECT_TRUE(c.within_bound);
  EXPECT_LE(c.second_eigenvalue, 2.0 * std::sqrt(13.0) + 1e-6);
}

TEST(Lps, Lps17_13IsNonBipartiteRamanujan) {
  const auto g = lps_construct(LpsParams::make(17, 13));
  EXPECT_EQ(g.n_vertices(), 1092u);
  EXPECT_EQ(g.degree(), 18u);
  EXPECT_FALSE(g.bipartite());
  const auto c = spectral_check(g, 17.0);
  EXPECT_TRUE(c.within_bound);
  EXPECT_TRUE(c.verified);
}

TEST(Lps, ArcBudgetRefusesHugeGraphs) {
  LpsOptions o;
  o.max_arcs = 1000;
  EXPECT_THROW(lps_construct(LpsParams::make(13, 5), o), CapabilityError);
}

TEST(Lps, PowerEstimateIsNeverVerified) {
  SpectralOptions o;
  o.dense_limit = 10;
  const auto est = spectral_check(lps_13_5(), 13.0, o);
  EXPECT_EQ(est.method, SpectralMethod::power_estimate);
  EXPECT_FALSE(est.verified);
  const auto dense = spectral_check(lps_13_5(), 13.0);
  EXPECT_NEAR(est.second_eigenvalue, dense.second_eigenvalue, 0.5);
  o.allow_estimate = false;
  EXPECT_THROW(spectral_check(lps_13_5(), 13.0, o), CapabilityError);
}

TEST(Lps, CrossEdgesAndMixing) {
  const auto k4 = complete4();
  const std::vector<std::uint32_t> a{0}, b{1, 2}, overlap{0, 3};
  EXPECT_EQ(count_cross_edges(k4, a, b), 2u);
  EXPECT_THROW(count_cross_edges(k4, a, overlap), PreconditionError);

  const auto& g = lps_13_5();
  auto rng = substream(4, 0);
  for (int t = 0; t < 100; ++t) {
    const auto pick = sample_without_replacement(120, 60, rng);
    std::vector<std::uint32_t> v1(pick.begin(), pick.begin() + 30), v2(pick.begin() + 30, pick.end());
    EXPECT_TRUE(mixing_check(g, v1, v2, 13.0));
  }
}

TEST(Lps, EdgeDensityPreconditions) {
  const auto& g = lps_13_5();
  std::vector<std::uint32_t> v1, v2;
  for (std::uint32_t i = 0; i < 60; ++i) (g.sides()[i] == g.sides()[0] ? v1 : v2).push_back(i);
  EXPECT_THROW(edge_density_guarantee(g, 13.0, 0.5, v1, v2), PreconditionError);  // 13 < 64
  EXPECT_THROW(edge_density_guarantee(g, 13.0, 1.5, v1, v2), PreconditionError);
}

TEST(Lps, RandomRegularGraphsAreSimple) {
  auto rng = substream(2, 0);
  const auto g = random_regular_graph(101, 4, rng);
  std::set<std::pair<std::uint32_t, std::uint32_t>> seen;
  for (const auto& e : g.edges()) {
    EXPECT_NE(e.u, e.v);
    EXPECT_TRUE(seen.insert(std::minmax(e.u, e.v)).second);
  }
  EXPECT_EQ(g.edges().size(), 202u);
  auto rng2 = substream(2, 0);
  EXPECT_TRUE(std::ranges::equal(random_regular_graph(101, 4, rng2).edges(), g.edges()));
  EXPECT_THROW(random_regular_graph(5, 3, rng), InvalidInput);
}

TEST(Lps, ProviderStrictPicksSmallestGraph) {
  const auto params = smallest_lps(100, 14);
  EXPECT_EQ(params.p, 13u);
  EXPECT_EQ(params.q, 5u);
  ProviderOptions o;
  o.mode = GraphMode::strict;
  GraphProvider strict(o);
  const auto g = strict(100, 14);
  EXPECT_EQ(g.n_vertices(), 120u);
}

TEST(Lps, ProviderEmpiricalCertifies) {
  ProviderOptions o;
  o.seed = 5;
  GraphProvider provider(o);
  const auto g = provider(200, 6);
  EXPECT_EQ(g.n_vertices(), 200u);
  ASSERT_TRUE(g.certificate().has_value());
  EXPECT_LE(g.certificate()->second_eigenvalue, 2.0 * std::sqrt(5.0) * 1.1);
  EXPECT_THROW(provider(5, 5), InvalidInput);
}

TEST(Lps, EdgeListRoundTrip) {
  std::stringstream s;
  write_edge_list(s, lps_13_5());
  const auto g = read_edge_list(s);
  EXPECT_EQ(g.n_vertices(), 120u);
  EXPECT_TRUE(std::ranges::equal(g.edges(), lps_13_5().edges()));
  std::istringstream bad("4 3\n0 1\nx y\n");
  EXPECT_THROW(read_edge_list(bad), ParseError);
  std::istringstream irregular("3 2\n0 1\n1 2\n");
  EXPECT_THROW(read_edge_list(irregular), ParseError);
}
