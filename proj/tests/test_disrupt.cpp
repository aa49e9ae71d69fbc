#include "doctest.h"

#include <random>
#include <set>

#include "marketgraph/disrupt.hpp"
#include "marketgraph/instance_io.hpp"
#include "marketgraph/oracles.hpp"

namespace mg = marketgraph;
using mg::BipartiteMarket;
using mg::EdgeSet;
using mg::Rat;

namespace {

BipartiteMarket random_swsh(std::mt19937_64& rng, int n) {
  BipartiteMarket m;
  m.buyers = m.sellers = n;
  m.goods = mg::GoodsClass::Homogeneous;
  m.values.assign(n, std::vector<Rat>(n));
  std::uniform_int_distribution<int> val(1, 8);
  for (int i = 0; i < n; ++i) {
    Rat v(val(rng), 2);
    for (int j = 0; j < n; ++j) m.values[i][j] = v;
  }
  for (int i = 0; i < n; ++i)
    if (rng() % 2 == 0) m.world_edges.insert({i, static_cast<int>(rng() % n)});
  return m;
}

BipartiteMarket random_shgb(std::mt19937_64& rng, int n, int sellers) {
  BipartiteMarket m;
  m.buyers = n;
  m.sellers = sellers;
  m.goods = mg::GoodsClass::Identity;
  m.values.assign(n, std::vector<Rat>(sellers, Rat(1)));
  std::set<std::pair<int, int>> seller_pairs;
  for (int i = 0; i < n; ++i) {
    int degree = static_cast<int>(rng() % 3);
    if (degree == 0) continue;
    int a = static_cast<int>(rng() % sellers);
    if (degree == 1) {
      m.world_edges.insert({i, a});
      continue;
    }
    int b = static_cast<int>(rng() % sellers);
    if (a == b) {
      m.world_edges.insert({i, a});
      continue;
    }
    auto key = std::minmax(a, b);
    if (seller_pairs.count(key)) {
      m.world_edges.insert({i, a});
      continue;
    }
    seller_pairs.insert(key);
    m.world_edges.insert({i, a});
    m.world_edges.insert({i, b});
  }
  return m;
}

BipartiteMarket random_homogeneous(std::mt19937_64& rng, int maxn) {
  BipartiteMarket m;
  m.buyers = 1 + static_cast<int>(rng() % maxn);
  m.sellers = 1 + static_cast<int>(rng() % maxn);
  m.goods = mg::GoodsClass::Homogeneous;
  m.values.assign(m.buyers, std::vector<Rat>(m.sellers));
  std::uniform_int_distribution<int> val(1, 6);
  for (int i = 0; i < m.buyers; ++i) {
    Rat v(val(rng), 2);
    for (int j = 0; j < m.sellers; ++j) m.values[i][j] = v;
  }
  for (int i = 0; i < m.buyers; ++i)
    for (int j = 0; j < m.sellers; ++j)
      if (rng() % 3 == 0) m.world_edges.insert({i, j});
  return m;
}

Rat harmonic(int k) {
  Rat h(0);
  for (int i = 1; i <= k; ++i) h += Rat(1, i);
  return h;
}

}  // namespace

TEST_CASE("platform revenue on the chain figure") {
  const int n = 5;
  BipartiteMarket c =
      *mg::generate("chain", {{"n", std::to_string(n)}}).bipartite;
  EdgeSet all_dashed, diagonal;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (!c.values[i][j].is_zero()) all_dashed.insert({i, j});
  for (int i = 0; i < n; ++i) diagonal.insert({i, i});

  CHECK(mg::platform_revenue(c, all_dashed).revenue == Rat(5));
  CHECK(mg::platform_revenue(c, diagonal).revenue == Rat(15));
  CHECK(mg::platform_revenue(c, {}).revenue == Rat(0));

  // The diagonal is optimal: the all-transact oracle agrees.
  mg::EdgesEnum oracle = mg::enum_platform_edges_transact(c);
  CHECK(oracle.best_revenue == Rat(15));
}

TEST_CASE("platform revenue favors its own edges only through ties") {
  BipartiteMarket m = *mg::generate("prm2", {{"eps", "1/100"}}).bipartite;
  mg::PlatformRevenueResult r = mg::platform_revenue(m, {{0, 1}});
  CHECK(r.welfare == Rat(2));
  CHECK(r.revenue == Rat(1));

  CHECK_THROWS_AS(mg::platform_revenue(m, {{1, 0}}), std::invalid_argument);
}

TEST_CASE("greedy conversion keeps at least the harmonic share") {
  for (int k : {2, 3, 4}) {
    BipartiteMarket m =
        *mg::generate("conv-tight", {{"k", std::to_string(k)}}).bipartite;
    EdgeSet dummies;
    for (int i = 0; i < k; ++i) dummies.insert({k + i, k + i});
    mg::GreedyConversion g = mg::greedy_welfare_to_revenue(m, dummies);
    CHECK(g.delta_welfare == harmonic(k));
    CHECK(g.revenue == Rat(1));
  }

  // Single edge: everything converts.
  BipartiteMarket pair;
  pair.buyers = pair.sellers = 1;
  pair.values = {{Rat(7)}};
  mg::GreedyConversion one = mg::greedy_welfare_to_revenue(pair, {{0, 0}});
  CHECK(one.delta_welfare == Rat(7));
  CHECK(one.revenue >= one.delta_welfare);

  // Random worlds with a welfare-optimal completion.
  std::mt19937_64 rng(51);
  for (int it = 0; it < 20; ++it) {
    BipartiteMarket m = random_homogeneous(rng, 5);
    auto world_match = mg::max_weight_matching(m, m.world_edges);
    auto full_match = mg::max_weight_matching(m, m.complete_edges());
    EdgeSet ep;
    for (auto [i, j] : full_match.first.pairs)
      if (!m.is_world_edge(i, j)) ep.insert({i, j});
    if (ep.empty()) continue;
    mg::GreedyConversion g = mg::greedy_welfare_to_revenue(m, ep);
    CHECK(g.delta_welfare == full_match.second - world_match.second);
    CHECK(g.revenue * harmonic(static_cast<int>(ep.size())) >=
          g.delta_welfare);
  }
}

TEST_CASE("swsh solves the four-buyer decomposition figure") {
  BipartiteMarket m = *mg::generate("swsh4", {}).bipartite;
  mg::EdgeSetRevenue r = mg::swsh_optimal(m);
  CHECK(r.edges == EdgeSet{{0, 1}, {1, 0}, {2, 2}, {3, 3}});
  CHECK(r.revenue == Rat(22));
  CHECK(mg::enum_platform_edges_transact(m).best_revenue == Rat(22));
}

TEST_CASE("swsh trivial cases") {
  // One subgraph, no dangling agents: no platform edge helps.
  BipartiteMarket solo;
  solo.buyers = solo.sellers = 1;
  solo.goods = mg::GoodsClass::Homogeneous;
  solo.values = {{Rat(5)}};
  solo.world_edges = {{0, 0}};
  mg::EdgeSetRevenue r = mg::swsh_optimal(solo);
  CHECK(r.edges.empty());
  CHECK(r.revenue == Rat(0));

  BipartiteMarket two_links;
  two_links.buyers = 1;
  two_links.sellers = 2;
  two_links.goods = mg::GoodsClass::Homogeneous;
  two_links.values = {{Rat(5), Rat(5)}};
  two_links.world_edges = {{0, 0}, {0, 1}};
  CHECK_THROWS_AS(mg::swsh_optimal(two_links), std::invalid_argument);
}

TEST_CASE("property: swsh equals the brute-force optimum") {
  std::mt19937_64 rng(52);
  for (int it = 0; it < 16; ++it) {
    int n = 2 + static_cast<int>(rng() % 5);
    BipartiteMarket m = random_swsh(rng, n);
    mg::EdgeSetRevenue fast = mg::swsh_optimal(m);
    mg::EdgesEnum oracle = mg::enum_platform_edges_transact(m);
    CHECK(fast.revenue == oracle.best_revenue);
  }
}

TEST_CASE("shgb worked cases") {
  // No world edges: every buyer pays the common value.
  BipartiteMarket free_market;
  free_market.buyers = free_market.sellers = 3;
  free_market.goods = mg::GoodsClass::Identity;
  free_market.values.assign(3, std::vector<Rat>(3, Rat(1)));
  mg::EdgeSetRevenue r = mg::shgb_optimal(free_market);
  CHECK(r.revenue == Rat(3));

  // Buyers-as-edges forming a 4-cycle over four sellers.
  BipartiteMarket cyc;
  cyc.buyers = cyc.sellers = 4;
  cyc.goods = mg::GoodsClass::Identity;
  cyc.values.assign(4, std::vector<Rat>(4, Rat(1)));
  cyc.world_edges = {{0, 0}, {0, 1}, {1, 1}, {1, 2},
                     {2, 2}, {2, 3}, {3, 3}, {3, 0}};
  r = mg::shgb_optimal(cyc);
  CHECK(r.revenue == Rat(4));
  CHECK(mg::enum_platform_edges_transact(cyc).best_revenue == Rat(4));
}

TEST_CASE("property: shgb equals the brute-force optimum") {
  std::mt19937_64 rng(53);
  for (int it = 0; it < 16; ++it) {
    int n = 2 + static_cast<int>(rng() % 5);
    int sellers = std::max(2, n + static_cast<int>(rng() % 3) - 1);
    BipartiteMarket m = random_shgb(rng, n, sellers);
    mg::EdgeSetRevenue fast = mg::shgb_optimal(m);
    mg::EdgesEnum oracle = mg::enum_platform_edges_transact(m);
    CHECK(fast.revenue == oracle.best_revenue);
  }
}

TEST_CASE("hall violators") {
  // Complete world graph: no violator at all.
  BipartiteMarket complete;
  complete.buyers = complete.sellers = 3;
  complete.goods = mg::GoodsClass::Identity;
  complete.values.assign(3, std::vector<Rat>(3, Rat(1)));
  complete.world_edges = complete.complete_edges();
  mg::SurplusSet s = mg::max_diff_hall_violator(complete);
  CHECK(s.deficiency == 0);
  CHECK(s.buyers.empty());
  CHECK(!mg::vertex_hall_violator(complete, 1).has_value());

  // Three buyers sharing one seller.
  BipartiteMarket star;
  star.buyers = 3;
  star.sellers = 1;
  star.goods = mg::GoodsClass::Identity;
  star.values.assign(3, std::vector<Rat>(1, Rat(1)));
  star.world_edges = {{0, 0}, {1, 0}, {2, 0}};
  s = mg::max_diff_hall_violator(star);
  CHECK(s.buyers == std::vector<int>{0, 1, 2});
  CHECK(s.deficiency == 2);

  // An isolated buyer is its own violator.
  BipartiteMarket iso;
  iso.buyers = 2;
  iso.sellers = 1;
  iso.goods = mg::GoodsClass::Identity;
  iso.values.assign(2, std::vector<Rat>(1, Rat(1)));
  auto v = mg::vertex_hall_violator(iso, 0);
  REQUIRE(v.has_value());
  CHECK(v->buyers == std::vector<int>{0});
}

TEST_CASE("property: hall machinery matches subset enumeration") {
  std::mt19937_64 rng(54);
  for (int it = 0; it < 30; ++it) {
    int n = 1 + static_cast<int>(rng() % 6);
    int sellers = 1 + static_cast<int>(rng() % 6);
    BipartiteMarket m;
    m.buyers = n;
    m.sellers = sellers;
    m.goods = mg::GoodsClass::Identity;
    m.values.assign(n, std::vector<Rat>(sellers, Rat(1)));
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < sellers; ++j)
        if (rng() % 3 == 0) m.world_edges.insert({i, j});

    // Enumerate every buyer subset for the maximum deficiency.
    int best = 0;
    std::vector<int> best_per_buyer(n, -1);
    for (int mask = 1; mask < (1 << n); ++mask) {
      std::vector<bool> nb(sellers, false);
      int size = 0;
      for (int i = 0; i < n; ++i)
        if (mask & (1 << i)) {
          ++size;
          for (auto [bi, j] : m.world_edges)
            if (bi == i) nb[j] = true;
        }
      int count = 0;
      for (int j = 0; j < sellers; ++j)
        if (nb[j]) ++count;
      int diff = size - count;
      best = std::max(best, diff);
      if (diff > 0)
        for (int i = 0; i < n; ++i)
          if (mask & (1 << i)) best_per_buyer[i] = std::max(best_per_buyer[i], diff);
    }
    mg::SurplusSet s = mg::max_diff_hall_violator(m);
    CHECK(s.deficiency == best);
    if (best > 0) {
      CHECK(static_cast<int>(s.buyers.size() - s.neighborhood.size()) == best);
    }
    for (int i = 0; i < n; ++i) {
      auto v = mg::vertex_hall_violator(m, i);
      CHECK(v.has_value() == (best_per_buyer[i] > 0));
      if (v)
        CHECK(static_cast<int>(v->buyers.size()) >
              static_cast<int>(v->neighborhood.size()));
    }
  }
}

TEST_CASE("homogeneous extraction") {
  // Monopolization: move the sale to the slightly richer outside buyer.
  BipartiteMarket mono;
  mono.buyers = 2;
  mono.sellers = 1;
  mono.goods = mg::GoodsClass::Homogeneous;
  mono.values = {{Rat(1)}, {Rat(101, 100)}};
  mono.world_edges = {{0, 0}};
  mg::EdgeSetRevenue r = mg::homogeneous_extract(mono);
  CHECK(r.edges == EdgeSet{{1, 0}});
  CHECK(r.revenue == Rat(101, 100));

  // No world economy at all: full optimal welfare extracted.
  BipartiteMarket open;
  open.buyers = open.sellers = 3;
  open.goods = mg::GoodsClass::Homogeneous;
  open.values.assign(3, std::vector<Rat>(3, Rat(2)));
  r = mg::homogeneous_extract(open);
  CHECK(r.revenue == Rat(6));

  std::mt19937_64 rng(55);
  for (int it = 0; it < 40; ++it) {
    BipartiteMarket m = random_homogeneous(rng, 7);
    Rat w_world = mg::max_weight_value(m, m.world_edges);
    Rat w_star = mg::max_weight_value(m, m.complete_edges());
    CHECK(mg::homogeneous_extract(m).revenue >= w_star - w_world);
  }
}

TEST_CASE("single pair price maximization") {
  BipartiteMarket pair;
  pair.buyers = pair.sellers = 1;
  pair.goods = mg::GoodsClass::Homogeneous;
  pair.values = {{Rat(9, 2)}};
  mg::EdgeSetRevenue r = mg::single_pair_max_revenue(pair, 0, 0);
  CHECK(r.revenue == Rat(9, 2));

  // Figure market: the pair (b1, s1) transacts at price 1, confirmed by a
  // subset brute force restricted to sets containing the pair.
  BipartiteMarket prm = *mg::generate("prm2", {{"eps", "1/100"}}).bipartite;
  prm.goods = mg::GoodsClass::Homogeneous;
  prm.values[1][1] = Rat(1);  // make the second row constant
  r = mg::single_pair_max_revenue(prm, 0, 0);
  Rat best(0);
  std::vector<std::pair<int, int>> candidates;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      if (!prm.is_world_edge(i, j) && !(i == 0 && j == 0))
        candidates.push_back({i, j});
  for (int mask = 0; mask < (1 << candidates.size()); ++mask) {
    EdgeSet ep{{0, 0}};
    for (std::size_t k = 0; k < candidates.size(); ++k)
      if (mask & (1 << k)) ep.insert(candidates[k]);
    mg::PlatformRevenueResult res = mg::platform_revenue(prm, ep);
    for (auto [i, j] : res.transacting_platform_edges)
      if (i == 0 && j == 0) best = Rat::max(best, res.prices.p[0]);
  }
  CHECK(best == Rat(1));
  CHECK(r.revenue == best);

  CHECK_THROWS_AS(mg::single_pair_max_revenue(prm, 1, 0),
                  std::invalid_argument);  // world edge
}

TEST_CASE("property: best single pair covers its share of the optimum") {
  std::mt19937_64 rng(56);
  for (int it = 0; it < 12; ++it) {
    int n = 2 + static_cast<int>(rng() % 3);
    BipartiteMarket m = random_homogeneous(rng, 1);
    m.buyers = m.sellers = n;
    m.values.assign(n, std::vector<Rat>(n));
    std::uniform_int_distribution<int> val(1, 6);
    for (int i = 0; i < n; ++i) {
      Rat v(val(rng), 2);
      for (int j = 0; j < n; ++j) m.values[i][j] = v;
    }
    m.world_edges.clear();
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (rng() % 4 == 0) m.world_edges.insert({i, j});

    mg::EdgesEnum oracle = mg::enum_platform_edges_subsets(m, 20);
    Rat best_pair(0);
    std::vector<int> order(n);
    for (int i = 0; i < n; ++i) order[i] = i;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        if (m.is_world_edge(i, j)) continue;
        mg::EdgeSetRevenue r;
        try {
          r = mg::single_pair_max_revenue(m, i, j);
        } catch (const std::invalid_argument&) {
          continue;  // buyer below the top-min(n,m) cut
        }
        best_pair = Rat::max(best_pair, r.revenue);
      }
    CHECK(best_pair * Rat(n) >= oracle.best_revenue);
  }
}

TEST_CASE("property: pruning safety of the all-transact oracle") {
  std::mt19937_64 rng(57);
  for (int it = 0; it < 8; ++it) {
    BipartiteMarket m = random_homogeneous(rng, 4);
    if (m.buyers * m.sellers > 16) continue;
    mg::EdgesEnum full = mg::enum_platform_edges_subsets(m, 16);
    mg::EdgesEnum pruned = mg::enum_platform_edges_transact(m);
    CHECK(full.best_revenue == pruned.best_revenue);
  }
}

TEST_CASE("property: revenue-optimal sets keep homogeneous welfare optimal") {
  std::mt19937_64 rng(58);
  for (int it = 0; it < 8; ++it) {
    BipartiteMarket m = random_homogeneous(rng, 3);
    Rat w_star = mg::max_weight_value(m, m.complete_edges());
    mg::EdgesEnum oracle = mg::enum_platform_edges_subsets(m, 16);
    for (const EdgeSet& ep : oracle.argmax) {
      auto [revenue, welfare] = mg::platform_revenue_value(m, ep);
      CHECK(revenue == oracle.best_revenue);
      CHECK(welfare == w_star);
    }
  }
}
