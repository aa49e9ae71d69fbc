#include "marketgraph/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <stdexcept>

#include "marketgraph/bundle.hpp"
#include "marketgraph/fees.hpp"

namespace marketgraph {

PlatformEqEnum platform_eq_enum(const BipartiteMarket& m, const Rat& alpha,
                                int max_sellers) {
  if (m.sellers > max_sellers)
    throw std::invalid_argument("instance exceeds the 2^m enumeration guard");
  PlatformEqEnum out;
  for (int mask = 0; mask < (1 << m.sellers); ++mask) {
    std::vector<int> P;
    for (int j = 0; j < m.sellers; ++j)
      if (mask & (1 << j)) P.push_back(j);
    ++out.examined;
    if (verify_platform_equilibrium(m, alpha, P).empty())
      out.equilibria.push_back(P);
  }
  return out;
}

namespace {

// Opportunity-path prices on a given matching, written directly against
// adjacency arrays so the oracle stays independent of the engine code path.
std::vector<Rat> bfs_prices(const BipartiteMarket& m,
                            const std::vector<std::vector<int>>& adj,
                            const std::vector<int>& seller_of,
                            const std::vector<int>& buyer_of) {
  std::vector<Rat> price(m.sellers, Rat(0));
  std::vector<int> stamp(m.buyers, -1);
  for (int j = 0; j < m.sellers; ++j) {
    int start = buyer_of[j];
    if (start == -1) continue;
    Rat best = m.values[start][0];
    bool unsold = false;
    std::vector<int> stack{start};
    stamp[start] = j;
    while (!stack.empty() && !unsold) {
      int i = stack.back();
      stack.pop_back();
      if (m.values[i][0] < best) best = m.values[i][0];
      for (int s : adj[i]) {
        if (s == seller_of[i]) continue;
        int next = buyer_of[s];
        if (next == -1) {
          unsold = true;
          break;
        }
        if (stamp[next] != j) {
          stamp[next] = j;
          stack.push_back(next);
        }
      }
    }
    price[j] = unsold ? Rat(0) : best;
  }
  return price;
}

bool homogeneous_goods(const BipartiteMarket& m) {
  return m.goods == GoodsClass::Homogeneous || m.goods == GoodsClass::Identity;
}

// Revenue of one platform set under revenue-favoring tie-breaking, computed
// from first principles (marginal prices plus a secondary-objective solve).
Rat subset_revenue(const BipartiteMarket& world, const EdgeSet& ep) {
  EdgeSet gp = world.world_edges;
  gp.insert(ep.begin(), ep.end());
  WeightedBipartite g(world.buyers, world.sellers);
  for (auto [i, j] : gp) g.weight[i][j] = WeightPair{world.values[i][j]};
  Rat total = max_weight_value(g).primary;
  std::vector<Rat> price(world.sellers, Rat(0));
  for (auto [i, j] : ep) {
    if (!price[j].is_zero()) continue;
    WeightedBipartite h = g;
    for (int b = 0; b < world.buyers; ++b) h.weight[b][j].reset();
    price[j] = total - max_weight_value(h).primary;
  }
  WeightedBipartite two(world.buyers, world.sellers);
  for (auto [i, j] : gp)
    two.weight[i][j] =
        WeightPair{world.values[i][j], ep.count({i, j}) ? price[j] : Rat(0)};
  return max_weight_value(two).secondary;
}

}  // namespace

EdgesEnum enum_platform_edges_subsets(const BipartiteMarket& world,
                                      int max_pairs) {
  if (world.buyers * world.sellers > max_pairs)
    throw std::invalid_argument(
        "instance exceeds the subset enumeration guard (n*m <= " +
        std::to_string(max_pairs) + ")");
  std::vector<std::pair<int, int>> candidates;
  for (int i = 0; i < world.buyers; ++i)
    for (int j = 0; j < world.sellers; ++j)
      if (!world.is_world_edge(i, j)) candidates.push_back({i, j});
  EdgesEnum out;
  const long long total = 1LL << candidates.size();
  for (long long mask = 0; mask < total; ++mask) {
    EdgeSet ep;
    for (std::size_t k = 0; k < candidates.size(); ++k)
      if (mask & (1LL << k)) ep.insert(candidates[k]);
    ++out.examined;
    Rat revenue = subset_revenue(world, ep);
    if (out.argmax.empty() || revenue > out.best_revenue) {
      out.best_revenue = revenue;
      out.argmax = {ep};
    } else if (revenue == out.best_revenue) {
      out.argmax.push_back(ep);
    }
  }
  return out;
}

EdgesEnum enum_platform_edges_transact(const BipartiteMarket& world,
                                       int max_side) {
  const int n = world.buyers, m = world.sellers;
  if (std::min(n, m) > max_side)
    throw std::invalid_argument(
        "instance exceeds the assignment enumeration guard");
  const bool homogeneous = homogeneous_goods(world);

  // Zero-value buyers never change prices or revenue in homogeneous markets;
  // skipping them keeps the enumeration aligned with the saturation lemma.
  std::vector<int> active;
  for (int i = 0; i < n; ++i)
    if (!homogeneous || world.values[i][0] > Rat(0)) active.push_back(i);

  std::vector<std::vector<int>> adj(n);
  std::vector<int> seller_of(n, -1), buyer_of(m, -1);

  EdgesEnum out;
  std::map<EdgeSet, Rat> welfare_cache;
  auto graph_welfare = [&](const EdgeSet& ep) {
    auto it = welfare_cache.find(ep);
    if (it != welfare_cache.end()) return it->second;
    EdgeSet gp = world.world_edges;
    gp.insert(ep.begin(), ep.end());
    Rat w = max_weight_value(world, gp);
    welfare_cache.emplace(ep, w);
    return w;
  };
  std::set<EdgeSet> attempted;

  auto evaluate = [&]() {
    ++out.examined;
    EdgeSet ep;
    Rat sigma_weight(0);
    for (int i = 0; i < n; ++i) {
      if (seller_of[i] == -1) continue;
      sigma_weight += world.values[i][seller_of[i]];
      if (!world.is_world_edge(i, seller_of[i]))
        ep.insert({i, seller_of[i]});
    }
    if (!attempted.insert(ep).second) return;
    if (sigma_weight != graph_welfare(ep)) return;  // not an equilibrium pick

    Rat revenue(0);
    if (homogeneous) {
      // Opportunity-path rule, independent of the engine.
      for (int i = 0; i < n; ++i) adj[i].clear();
      for (auto [i, j] : world.world_edges) adj[i].push_back(j);
      for (auto [i, j] : ep) adj[i].push_back(j);
      std::vector<Rat> price = bfs_prices(world, adj, seller_of, buyer_of);
      for (auto [i, j] : ep) revenue += price[j];
    } else {
      revenue = subset_revenue(world, ep);
    }
    if (out.argmax.empty() || revenue > out.best_revenue) {
      out.best_revenue = revenue;
      out.argmax = {ep};
    } else if (revenue == out.best_revenue) {
      out.argmax.push_back(ep);
    }
  };

  const int k = static_cast<int>(active.size());
  if (k <= m) {
    auto rec = [&](auto&& self, int t) -> void {
      if (t == k) {
        evaluate();
        return;
      }
      int i = active[t];
      for (int j = 0; j < m; ++j) {
        if (buyer_of[j] != -1) continue;
        buyer_of[j] = i;
        seller_of[i] = j;
        self(self, t + 1);
        buyer_of[j] = -1;
        seller_of[i] = -1;
      }
    };
    rec(rec, 0);
  } else {
    auto rec = [&](auto&& self, int j) -> void {
      if (j == m) {
        evaluate();
        return;
      }
      for (int t = 0; t < k; ++t) {
        int i = active[t];
        if (seller_of[i] != -1) continue;
        seller_of[i] = j;
        buyer_of[j] = i;
        self(self, j + 1);
        seller_of[i] = -1;
        buyer_of[j] = -1;
      }
    };
    rec(rec, 0);
  }
  return out;
}

BundleEnum bundle_enum(const std::vector<double>& qualities, double sigma,
                       int max_n) {
  const int n = static_cast<int>(qualities.size());
  if (n > max_n)
    throw std::invalid_argument("instance exceeds the 2^N bundle guard");
  std::vector<double> solo(n);
  for (int i = 0; i < n; ++i) solo[i] = monopoly_rev(qualities[i], sigma).rev;

  BundleEnum out;
  for (int mask = 0; mask < (1 << n); ++mask) {
    ++out.examined;
    if (mask == 0) continue;
    double mu = 0.0, pay = 0.0;
    int count = 0;
    for (int i = 0; i < n; ++i)
      if (mask & (1 << i)) {
        mu += qualities[i];
        pay += solo[i];
        ++count;
      }
    double profit =
        monopoly_rev_core(mu, std::sqrt(static_cast<double>(count)) * sigma)
            .rev -
        pay;
    if (profit > out.profit) {
      out.profit = profit;
      out.best_subset.clear();
      for (int i = 0; i < n; ++i)
        if (mask & (1 << i)) out.best_subset.push_back(i);
    }
  }
  double window_best = complete_info_optimal_bundle(qualities, sigma).profit;
  out.contiguous_value =
      std::abs(window_best - out.profit) <=
      1e-9 * std::max({1.0, std::abs(window_best), std::abs(out.profit)});
  return out;
}

}  // namespace marketgraph
