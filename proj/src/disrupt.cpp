#include "marketgraph/disrupt.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <stdexcept>

namespace marketgraph {

namespace {

bool is_homogeneous(const BipartiteMarket& m) {
  return m.goods == GoodsClass::Homogeneous || m.goods == GoodsClass::Identity;
}

Rat buyer_value(const BipartiteMarket& m, int i) {
  return m.sellers == 0 ? Rat(0) : m.values[i][0];
}

// Buyers ordered by (value desc, index asc).
std::vector<int> buyers_by_value(const BipartiteMarket& m) {
  std::vector<int> order(m.buyers);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return buyer_value(m, a) > buyer_value(m, b);
  });
  return order;
}

}  // namespace

void validate_platform_edges(const BipartiteMarket& world, const EdgeSet& ep) {
  for (auto [i, j] : ep) {
    if (i < 0 || i >= world.buyers || j < 0 || j >= world.sellers)
      throw std::invalid_argument("platform edge index out of range");
    if (world.is_world_edge(i, j))
      throw std::invalid_argument("platform edge duplicates a world edge");
  }
}

namespace {

EdgeSet union_edges(const EdgeSet& a, const EdgeSet& b) {
  EdgeSet u = a;
  u.insert(b.begin(), b.end());
  return u;
}

// Max prices of the platform graph.  When `only_platform_sellers` is set the
// untouched entries stay zero, which is all the revenue objective needs.
PriceVector platform_prices(const BipartiteMarket& world, const EdgeSet& gp,
                            const EdgeSet& ep, bool only_platform_sellers) {
  WeightedBipartite g = to_weighted(world, gp);
  Rat total = max_weight_value(g).primary;
  PriceVector prices;
  prices.p.assign(world.sellers, Rat(0));
  std::vector<bool> wanted(world.sellers, !only_platform_sellers);
  if (only_platform_sellers)
    for (auto [i, j] : ep) wanted[j] = true;
  for (int j = 0; j < world.sellers; ++j) {
    if (!wanted[j]) continue;
    WeightedBipartite h = g;
    for (int i = 0; i < world.buyers; ++i) h.weight[i][j].reset();
    prices.p[j] = total - max_weight_value(h).primary;
  }
  return prices;
}

WeightedBipartite revenue_weighted(const BipartiteMarket& world,
                                   const EdgeSet& gp, const EdgeSet& ep,
                                   const PriceVector& prices) {
  WeightedBipartite g(world.buyers, world.sellers);
  for (auto [i, j] : gp)
    g.weight[i][j] =
        WeightPair{world.values[i][j], ep.count({i, j}) ? prices.p[j] : Rat(0)};
  return g;
}

}  // namespace

std::pair<Rat, Rat> platform_revenue_value(const BipartiteMarket& world,
                                           const EdgeSet& ep) {
  validate_platform_edges(world, ep);
  EdgeSet gp = union_edges(world.world_edges, ep);
  PriceVector prices = platform_prices(world, gp, ep, true);
  WeightPair best = max_weight_value(revenue_weighted(world, gp, ep, prices));
  return {best.secondary, best.primary};
}

PlatformRevenueResult platform_revenue(const BipartiteMarket& world,
                                       const EdgeSet& ep) {
  validate_platform_edges(world, ep);
  EdgeSet gp = union_edges(world.world_edges, ep);
  PlatformRevenueResult res;
  res.prices = platform_prices(world, gp, ep, false);
  WeightPair value;
  res.matching.pairs =
      lex_min_max_weight_matching(revenue_weighted(world, gp, ep, res.prices),
                                  &value);
  res.welfare = value.primary;
  res.revenue = value.secondary;
  for (auto [i, j] : res.matching.pairs)
    if (ep.count({i, j})) res.transacting_platform_edges.emplace_back(i, j);
  return res;
}

GreedyConversion greedy_welfare_to_revenue(const BipartiteMarket& world,
                                           const EdgeSet& ep) {
  validate_platform_edges(world, ep);
  GreedyConversion out;
  out.delta_welfare = max_weight_value(world, union_edges(world.world_edges, ep)) -
                      max_weight_value(world, world.world_edges);
  out.revenue = Rat(0);

  EdgeSet cur = ep;
  while (true) {
    PlatformRevenueResult r = platform_revenue(world, cur);
    out.revenue_trace.push_back(r.revenue);
    if (out.kept.empty() || r.revenue > out.revenue) {
      out.kept = cur;
      out.revenue = r.revenue;
    }
    if (cur.empty()) break;
    // Revenue carried by each platform edge: its price if it transacts.
    std::map<std::pair<int, int>, Rat> edge_rev;
    for (auto e : cur) edge_rev[e] = Rat(0);
    for (auto [i, j] : r.transacting_platform_edges)
      edge_rev[{i, j}] = r.prices.p[j];
    auto victim = cur.begin();
    for (auto it = cur.begin(); it != cur.end(); ++it)
      if (edge_rev[*it] < edge_rev[*victim]) victim = it;
    cur.erase(victim);
  }
  return out;
}

SurplusSet surplus_set_of(const BipartiteMarket& world,
                          const std::vector<int>& buyers) {
  SurplusSet s;
  s.buyers = buyers;
  std::sort(s.buyers.begin(), s.buyers.end());
  s.buyers.erase(std::unique(s.buyers.begin(), s.buyers.end()), s.buyers.end());
  std::vector<bool> nb(world.sellers, false);
  for (int b : s.buyers)
    for (auto [i, j] : world.world_edges)
      if (i == b) nb[j] = true;
  for (int j = 0; j < world.sellers; ++j)
    if (nb[j]) s.neighborhood.push_back(j);
  // Max matching between B_v and N(B_v) through non-world pairs.
  std::vector<std::vector<bool>> comp(
      s.buyers.size(), std::vector<bool>(s.neighborhood.size(), false));
  for (std::size_t a = 0; a < s.buyers.size(); ++a)
    for (std::size_t c = 0; c < s.neighborhood.size(); ++c)
      comp[a][c] = !world.is_world_edge(s.buyers[a], s.neighborhood[c]);
  s.k_v = max_cardinality(comp);
  int diff = static_cast<int>(s.buyers.size()) -
             static_cast<int>(s.neighborhood.size());
  s.deficiency = std::max(diff, 0);
  return s;
}

SurplusSet max_diff_hall_violator(const BipartiteMarket& world) {
  std::vector<std::vector<bool>> adj(world.buyers,
                                     std::vector<bool>(world.sellers, false));
  for (auto [i, j] : world.world_edges) adj[i][j] = true;

  // Kuhn matching, then alternating reachability from unmatched buyers.
  std::vector<int> buyer_of(world.sellers, -1), seller_of(world.buyers, -1);
  std::vector<bool> seen;
  std::function<bool(int)> grow = [&](int i) -> bool {
    for (int j = 0; j < world.sellers; ++j) {
      if (!adj[i][j] || seen[j]) continue;
      seen[j] = true;
      if (buyer_of[j] == -1 || grow(buyer_of[j])) {
        buyer_of[j] = i;
        seller_of[i] = j;
        return true;
      }
    }
    return false;
  };
  int match_size = 0;
  for (int i = 0; i < world.buyers; ++i) {
    seen.assign(world.sellers, false);
    if (grow(i)) ++match_size;
  }

  std::vector<bool> breach(world.buyers, false);
  std::vector<int> stack;
  for (int i = 0; i < world.buyers; ++i)
    if (seller_of[i] == -1) {
      breach[i] = true;
      stack.push_back(i);
    }
  while (!stack.empty()) {
    int i = stack.back();
    stack.pop_back();
    for (int j = 0; j < world.sellers; ++j) {
      if (!adj[i][j] || buyer_of[j] == -1) continue;
      int next = buyer_of[j];
      if (!breach[next]) {
        breach[next] = true;
        stack.push_back(next);
      }
    }
  }
  std::vector<int> reached;
  for (int i = 0; i < world.buyers; ++i)
    if (breach[i]) reached.push_back(i);
  SurplusSet s = surplus_set_of(world, reached);
  s.deficiency = world.buyers - match_size;
  return s;
}

std::optional<SurplusSet> vertex_hall_violator(const BipartiteMarket& world,
                                               int buyer) {
  if (buyer < 0 || buyer >= world.buyers)
    throw std::invalid_argument("buyer index out of range");
  std::vector<bool> gone_seller(world.sellers, false);
  int k = 0;
  for (auto [i, j] : world.world_edges)
    if (i == buyer && !gone_seller[j]) {
      gone_seller[j] = true;
      ++k;
    }
  if (k == 0) return surplus_set_of(world, {buyer});

  // Reduced instance without the buyer and its neighborhood.
  std::vector<int> bmap, smap(world.sellers, -1);
  BipartiteMarket reduced;
  reduced.goods = world.goods;
  for (int i = 0; i < world.buyers; ++i)
    if (i != buyer) bmap.push_back(i);
  reduced.buyers = static_cast<int>(bmap.size());
  for (int j = 0; j < world.sellers; ++j)
    if (!gone_seller[j]) {
      smap[j] = reduced.sellers++;
    }
  reduced.values.assign(reduced.buyers, std::vector<Rat>(reduced.sellers, Rat(0)));
  for (auto [i, j] : world.world_edges) {
    if (i == buyer || gone_seller[j]) continue;
    int bi = static_cast<int>(std::lower_bound(bmap.begin(), bmap.end(), i) -
                              bmap.begin());
    reduced.world_edges.insert({bi, smap[j]});
  }

  SurplusSet sub = max_diff_hall_violator(reduced);
  if (sub.deficiency < k) return std::nullopt;
  std::vector<int> out{buyer};
  for (int i : sub.buyers) out.push_back(bmap[i]);
  return surplus_set_of(world, out);
}

// ---------------------------------------------------------------------------
// SWSH: single world seller per buyer, homogeneous goods.
// ---------------------------------------------------------------------------

namespace {

struct SwshDecomposition {
  // Subgraphs sorted by top buyer value descending (ties: seller index).
  struct Sub {
    int seller;
    std::vector<int> buyers;  // value desc, index asc; buyers[0] is the top
  };
  std::vector<Sub> subs;
  std::vector<int> dangling_sellers;  // ascending
  std::vector<int> dangling_buyers;   // value desc
};

struct SwshContext {
  const BipartiteMarket* world;
  std::vector<bool> active_buyer;
  std::vector<bool> active_seller;
  SwshDecomposition dec;
};

SwshDecomposition decompose(const BipartiteMarket& m,
                            const std::vector<bool>& active_buyer,
                            const std::vector<bool>& active_seller) {
  SwshDecomposition d;
  std::vector<std::vector<int>> by_seller(m.sellers);
  std::vector<bool> buyer_linked(m.buyers, false);
  for (auto [i, j] : m.world_edges) {
    if (!active_buyer[i] || !active_seller[j]) continue;
    by_seller[j].push_back(i);
    buyer_linked[i] = true;
  }
  for (int j = 0; j < m.sellers; ++j) {
    if (!active_seller[j]) continue;
    if (by_seller[j].empty()) {
      d.dangling_sellers.push_back(j);
      continue;
    }
    SwshDecomposition::Sub sub;
    sub.seller = j;
    sub.buyers = by_seller[j];
    std::stable_sort(sub.buyers.begin(), sub.buyers.end(), [&](int a, int b) {
      return buyer_value(m, a) > buyer_value(m, b);
    });
    d.subs.push_back(std::move(sub));
  }
  std::stable_sort(d.subs.begin(), d.subs.end(), [&](const auto& a, const auto& b) {
    return buyer_value(m, a.buyers[0]) > buyer_value(m, b.buyers[0]);
  });
  for (int i = 0; i < m.buyers; ++i)
    if (active_buyer[i] && !buyer_linked[i]) d.dangling_buyers.push_back(i);
  std::stable_sort(d.dangling_buyers.begin(), d.dangling_buyers.end(),
                   [&](int a, int b) { return buyer_value(m, a) > buyer_value(m, b); });
  return d;
}

// A candidate structure is turned into a sub-instance: the named agents plus
// fresh dangling sellers pairing every leftover buyer, then priced through
// the platform engine.  `pseudo_value`, when set, adds an isolated buyer sold
// by `attach_seller`.
struct SubInstance {
  BipartiteMarket market;
  EdgeSet ep;
};

Rat engine_revenue(const SubInstance& s) {
  return platform_revenue_value(s.market, s.ep).first;
}

// Builds the candidate edge set for a contiguous cycle window [lo, hi] of the
// decomposition, self-contained with leftover pairings.
Rat window_revenue(const BipartiteMarket& m, const SwshDecomposition& d, int lo,
                   int hi) {
  std::vector<int> buyers, sellers;
  for (int t = lo; t <= hi; ++t) {
    sellers.push_back(d.subs[t].seller);
    for (int b : d.subs[t].buyers) buyers.push_back(b);
  }
  int fresh = static_cast<int>(buyers.size()) - (hi - lo + 1);
  SubInstance s;
  s.market.buyers = static_cast<int>(buyers.size());
  s.market.sellers = static_cast<int>(sellers.size()) + fresh;
  s.market.goods = GoodsClass::Homogeneous;
  s.market.values.assign(s.market.buyers,
                         std::vector<Rat>(s.market.sellers, Rat(0)));
  auto bidx = [&](int orig) {
    return static_cast<int>(std::find(buyers.begin(), buyers.end(), orig) -
                            buyers.begin());
  };
  for (int bi = 0; bi < s.market.buyers; ++bi)
    for (int sj = 0; sj < s.market.sellers; ++sj)
      s.market.values[bi][sj] = buyer_value(m, buyers[bi]);
  for (int t = lo; t <= hi; ++t)
    for (int b : d.subs[t].buyers)
      s.market.world_edges.insert({bidx(b), t - lo});
  if (hi > lo) {
    for (int t = lo; t < hi; ++t)
      s.ep.insert({bidx(d.subs[t + 1].buyers[0]), t - lo});
    s.ep.insert({bidx(d.subs[lo].buyers[0]), hi - lo});
  }
  // Leftover buyers (non-tops) go to fresh dangling sellers.
  int next_fresh = hi - lo + 1;
  for (int t = lo; t <= hi; ++t)
    for (std::size_t k = 1; k < d.subs[t].buyers.size(); ++k)
      s.ep.insert({bidx(d.subs[t].buyers[k]), next_fresh++});
  return engine_revenue(s);
}

// Candidate edge set for the chain over subgraphs [c, L).  The terminal
// seller either serves an isolated attachment target of value `pseudo`, or
// its own world buyer `own_second` (original index), or nothing.
Rat chain_revenue(const BipartiteMarket& m, const SwshDecomposition& d, int c,
                  const std::optional<Rat>& pseudo,
                  std::optional<int> own_second = std::nullopt) {
  int L = static_cast<int>(d.subs.size());
  std::vector<int> buyers;
  for (int t = c; t < L; ++t)
    for (int b : d.subs[t].buyers) buyers.push_back(b);
  int chain_len = L - c;
  int leftovers = static_cast<int>(buyers.size()) - chain_len + 1 -
                  (own_second ? 1 : 0);
  SubInstance s;
  s.market.buyers = static_cast<int>(buyers.size()) + (pseudo ? 1 : 0);
  s.market.sellers = chain_len + leftovers;
  s.market.goods = GoodsClass::Homogeneous;
  s.market.values.assign(s.market.buyers,
                         std::vector<Rat>(s.market.sellers, Rat(0)));
  auto bidx = [&](int orig) {
    return static_cast<int>(std::find(buyers.begin(), buyers.end(), orig) -
                            buyers.begin());
  };
  for (std::size_t bi = 0; bi < buyers.size(); ++bi)
    for (int sj = 0; sj < s.market.sellers; ++sj)
      s.market.values[bi][sj] = buyer_value(m, buyers[bi]);
  if (pseudo)
    for (int sj = 0; sj < s.market.sellers; ++sj)
      s.market.values[s.market.buyers - 1][sj] = *pseudo;
  for (int t = c; t < L; ++t)
    for (int b : d.subs[t].buyers)
      s.market.world_edges.insert({bidx(b), t - c});
  // Chain edges: seller of subgraph t sells the top buyer of subgraph t-1.
  for (int t = c + 1; t < L; ++t)
    s.ep.insert({bidx(d.subs[t - 1].buyers[0]), t - c});
  if (pseudo) s.ep.insert({s.market.buyers - 1, 0});
  // Leftovers: non-top buyers plus the smallest subgraph's top.
  int next_fresh = chain_len;
  for (int t = c; t < L; ++t)
    for (std::size_t k = 1; k < d.subs[t].buyers.size(); ++k) {
      if (own_second && d.subs[t].buyers[k] == *own_second) continue;
      s.ep.insert({bidx(d.subs[t].buyers[k]), next_fresh++});
    }
  s.ep.insert({bidx(d.subs[L - 1].buyers[0]), next_fresh++});
  return engine_revenue(s);
}

struct SwshPlan {
  Rat total;
  int chain_start;                  // == L for "no chain"
  std::optional<int> attach_buyer;  // original index of the attachment target
  std::optional<int> own_second;    // terminal sells its own world buyer
  std::vector<std::pair<int, int>> windows;  // cycle windows over the prefix
};

// DP over contiguous cycle windows of length <= 3 plus at most one chain.
SwshPlan solve_structure(const BipartiteMarket& m, const SwshDecomposition& d) {
  int L = static_cast<int>(d.subs.size());
  Rat base(0);
  for (int b : d.dangling_buyers) base += buyer_value(m, b);

  std::map<std::pair<int, int>, Rat> window;
  auto window_value = [&](int lo, int hi) {
    auto key = std::make_pair(lo, hi);
    auto it = window.find(key);
    if (it == window.end())
      it = window.emplace(key, window_revenue(m, d, lo, hi)).first;
    return it->second;
  };

  std::vector<Rat> dp(L + 1, Rat(0));
  std::vector<int> dp_arg(L + 1, 0);
  for (int c = 1; c <= L; ++c) {
    bool init = false;
    for (int len = 1; len <= 3 && len <= c; ++len) {
      Rat cand = dp[c - len] + window_value(c - len, c - 1);
      if (!init || cand > dp[c]) {
        dp[c] = cand;
        dp_arg[c] = len;
        init = true;
      }
    }
  }

  SwshPlan best;
  best.total = dp[L] + base;
  best.chain_start = L;
  for (int c = 0; c < L; ++c) {
    // Terminal sells nothing.
    {
      Rat cand = dp[c] + chain_revenue(m, d, c, std::nullopt) + base;
      if (cand > best.total) {
        best.total = cand;
        best.chain_start = c;
        best.attach_buyer.reset();
        best.own_second.reset();
      }
    }
    // Terminal sells one of its own non-top world buyers.
    for (std::size_t k = 1; k < d.subs[c].buyers.size(); ++k) {
      int b2 = d.subs[c].buyers[k];
      Rat cand = dp[c] + chain_revenue(m, d, c, std::nullopt, b2) + base;
      if (cand > best.total) {
        best.total = cand;
        best.chain_start = c;
        best.attach_buyer.reset();
        best.own_second = b2;
      }
    }
    // Attach to a dangling buyer or to a non-top buyer of a cycle subgraph.
    std::vector<int> targets = d.dangling_buyers;
    for (int t = 0; t < c; ++t)
      for (std::size_t k = 1; k < d.subs[t].buyers.size(); ++k)
        targets.push_back(d.subs[t].buyers[k]);
    std::map<Rat, int> by_value;  // dedupe attachment candidates by value
    for (int b : targets) by_value.emplace(buyer_value(m, b), b);
    for (auto& [v, b] : by_value) {
      Rat cand = dp[c] + chain_revenue(m, d, c, v) - v + base;
      if (cand > best.total) {
        best.total = cand;
        best.chain_start = c;
        best.attach_buyer = b;
        best.own_second.reset();
      }
    }
  }

  // Recover the cycle windows of the chosen prefix.
  int c = best.chain_start;
  for (int at = c; at > 0; at -= dp_arg[at])
    best.windows.emplace_back(at - dp_arg[at], at - 1);
  std::reverse(best.windows.begin(), best.windows.end());
  return best;
}

EdgeSet realize_plan(const BipartiteMarket& m, const SwshDecomposition& d,
                     const SwshPlan& plan) {
  EdgeSet ep;
  int L = static_cast<int>(d.subs.size());
  std::vector<int> free_sellers = d.dangling_sellers;
  std::vector<int> leftover_buyers;

  for (auto [lo, hi] : plan.windows) {
    if (hi > lo) {
      for (int t = lo; t < hi; ++t)
        ep.insert({d.subs[t + 1].buyers[0], d.subs[t].seller});
      ep.insert({d.subs[lo].buyers[0], d.subs[hi].seller});
    }
    for (int t = lo; t <= hi; ++t)
      for (std::size_t k = 1; k < d.subs[t].buyers.size(); ++k)
        leftover_buyers.push_back(d.subs[t].buyers[k]);
  }
  if (plan.chain_start < L) {
    for (int t = plan.chain_start + 1; t < L; ++t)
      ep.insert({d.subs[t - 1].buyers[0], d.subs[t].seller});
    if (plan.attach_buyer)
      ep.insert({*plan.attach_buyer, d.subs[plan.chain_start].seller});
    for (int t = plan.chain_start; t < L; ++t)
      for (std::size_t k = 1; k < d.subs[t].buyers.size(); ++k)
        leftover_buyers.push_back(d.subs[t].buyers[k]);
    leftover_buyers.push_back(d.subs[L - 1].buyers[0]);
  }
  for (int b : d.dangling_buyers) leftover_buyers.push_back(b);
  for (std::optional<int> skip : {plan.attach_buyer, plan.own_second}) {
    if (!skip) continue;
    auto it = std::find(leftover_buyers.begin(), leftover_buyers.end(), *skip);
    if (it != leftover_buyers.end()) leftover_buyers.erase(it);
  }
  std::sort(leftover_buyers.begin(), leftover_buyers.end());
  std::size_t next = 0;
  for (int b : leftover_buyers) {
    if (next >= free_sellers.size()) break;
    ep.insert({b, free_sellers[next++]});
  }
  return ep;
}

}  // namespace

EdgeSetRevenue swsh_optimal(const BipartiteMarket& world) {
  if (!is_homogeneous(world))
    throw std::invalid_argument("swsh requires homogeneous goods");
  std::vector<int> degree(world.buyers, 0);
  for (auto [i, j] : world.world_edges) ++degree[i];
  for (int i = 0; i < world.buyers; ++i)
    if (degree[i] > 1)
      throw std::invalid_argument("swsh requires buyer world degree <= 1");

  // Zero-value buyers never carry revenue and only depress opportunity-path
  // prices; drop them before the size reductions.
  std::vector<bool> active_buyer(world.buyers, true),
      active_seller(world.sellers, true);
  int live_buyers = 0;
  for (int i = 0; i < world.buyers; ++i) {
    active_buyer[i] = buyer_value(world, i) > Rat(0);
    if (active_buyer[i]) ++live_buyers;
  }
  if (live_buyers > world.sellers) {
    // Keep only the top-m buyers.
    std::vector<int> order = buyers_by_value(world);
    active_buyer.assign(world.buyers, false);
    for (int k = 0; k < world.sellers; ++k) active_buyer[order[k]] = true;
  } else if (world.sellers > live_buyers) {
    // Discard dangling sellers down to the live buyer count.
    std::vector<bool> linked(world.sellers, false);
    for (auto [i, j] : world.world_edges)
      if (active_buyer[i]) linked[j] = true;
    int excess = world.sellers - live_buyers;
    for (int j = world.sellers - 1; j >= 0 && excess > 0; --j)
      if (!linked[j]) {
        active_seller[j] = false;
        --excess;
      }
    if (excess > 0)
      throw std::logic_error("swsh reduction found too few dangling sellers");
  }

  SwshDecomposition dec = decompose(world, active_buyer, active_seller);
  SwshPlan plan = solve_structure(world, dec);
  EdgeSetRevenue out;
  out.edges = realize_plan(world, dec, plan);
  out.revenue = platform_revenue_value(world, out.edges).first;
  if (out.revenue < plan.total)
    throw std::logic_error("swsh plan value mismatch: plan " +
                           plan.total.str() + " vs engine " +
                           out.revenue.str());
  return out;
}

// ---------------------------------------------------------------------------
// SHGB: sparse identity-goods markets with buyer degree <= 2.
// ---------------------------------------------------------------------------

namespace {

int shgb_units(const BipartiteMarket& m, const std::vector<int>& bv) {
  SurplusSet s = surplus_set_of(m, bv);
  int nb = static_cast<int>(s.neighborhood.size());
  int size = static_cast<int>(s.buyers.size());
  if (nb > size) return -1;  // positive surplus: not a witness
  return std::min(size, m.sellers) - nb + s.k_v;
}

EdgeSet shgb_realize(const BipartiteMarket& m, const std::vector<int>& bv) {
  SurplusSet s = surplus_set_of(m, bv);
  EdgeSet ep;
  // Match k_v buyers to N(B_v) through complement pairs (Kuhn on the
  // complement bipartite graph).
  std::vector<std::vector<bool>> comp(
      s.buyers.size(), std::vector<bool>(s.neighborhood.size(), false));
  for (std::size_t a = 0; a < s.buyers.size(); ++a)
    for (std::size_t c = 0; c < s.neighborhood.size(); ++c)
      comp[a][c] = !m.is_world_edge(s.buyers[a], s.neighborhood[c]);
  std::vector<int> owner(s.neighborhood.size(), -1);
  std::vector<bool> seen;
  std::function<bool(int)> grow = [&](int a) -> bool {
    for (std::size_t c = 0; c < s.neighborhood.size(); ++c) {
      if (!comp[a][c] || seen[c]) continue;
      seen[c] = true;
      if (owner[c] == -1 || grow(owner[c])) {
        owner[c] = a;
        return true;
      }
    }
    return false;
  };
  std::vector<bool> used_buyer(s.buyers.size(), false);
  for (std::size_t a = 0; a < s.buyers.size(); ++a) {
    seen.assign(s.neighborhood.size(), false);
    grow(static_cast<int>(a));
  }
  for (std::size_t c = 0; c < s.neighborhood.size(); ++c)
    if (owner[c] != -1) {
      ep.insert({s.buyers[owner[c]], s.neighborhood[c]});
      used_buyer[owner[c]] = true;
    }
  // Extra buyers go to sellers outside N(B_v).
  int extra = std::min(static_cast<int>(s.buyers.size()), m.sellers) -
              static_cast<int>(s.neighborhood.size());
  std::vector<int> outside;
  std::vector<bool> in_nb(m.sellers, false);
  for (int j : s.neighborhood) in_nb[j] = true;
  for (int j = 0; j < m.sellers; ++j)
    if (!in_nb[j]) outside.push_back(j);
  std::size_t next = 0;
  for (std::size_t a = 0; a < s.buyers.size() && extra > 0; ++a) {
    if (used_buyer[a]) continue;
    if (next >= outside.size()) break;
    ep.insert({s.buyers[a], outside[next++]});
    used_buyer[a] = true;
    --extra;
  }
  return ep;
}

}  // namespace

EdgeSetRevenue shgb_optimal(const BipartiteMarket& world) {
  if (world.goods != GoodsClass::Identity)
    throw std::invalid_argument("shgb requires identity goods");
  std::vector<std::vector<int>> nb(world.buyers);
  for (auto [i, j] : world.world_edges) nb[i].push_back(j);
  for (int i = 0; i < world.buyers; ++i)
    if (nb[i].size() > 2)
      throw std::invalid_argument("shgb requires buyer degree <= 2");
  for (int i = 0; i < world.buyers; ++i)
    for (int k = i + 1; k < world.buyers; ++k) {
      if (nb[i].size() != 2 || nb[k].size() != 2) continue;
      auto a = nb[i], b = nb[k];
      std::sort(a.begin(), a.end());
      std::sort(b.begin(), b.end());
      if (a == b)
        throw std::invalid_argument(
            "shgb requires any two sellers to share at most one buyer");
    }
  Rat c(0);
  for (const auto& row : world.values)
    for (const auto& v : row)
      if (!v.is_zero()) c = v;
  if (c.is_zero() || world.sellers == 0) return {{}, Rat(0)};

  std::vector<std::vector<int>> candidates;
  candidates.push_back({});

  // (a) Peel degree-0/1 buyers, then component selection on the remainder.
  {
    std::vector<bool> seller_alive(world.sellers, true);
    std::vector<bool> taken(world.buyers, false);
    bool moved = true;
    while (moved) {
      moved = false;
      for (int i = 0; i < world.buyers; ++i) {
        if (taken[i]) continue;
        int deg = 0;
        for (int j : nb[i])
          if (seller_alive[j]) ++deg;
        if (deg <= 1) {
          taken[i] = true;
          for (int j : nb[i]) seller_alive[j] = false;
          moved = true;
        }
      }
    }
    std::vector<int> base;
    std::vector<bool> base_nb(world.sellers, false);
    for (int i = 0; i < world.buyers; ++i)
      if (taken[i]) {
        base.push_back(i);
        for (int j : nb[i]) base_nb[j] = true;
      }
    int budget = static_cast<int>(base.size());
    for (int j = 0; j < world.sellers; ++j)
      if (base_nb[j]) --budget;

    // Remaining degree-2 buyers map to edges of a general graph on the
    // surviving sellers; pick components.
    std::vector<int> comp_id(world.sellers, -1);
    struct Component {
      std::vector<int> buyers;
      std::vector<int> sellers;
    };
    std::vector<Component> comps;
    std::vector<std::vector<std::pair<int, int>>> adj(world.sellers);
    for (int i = 0; i < world.buyers; ++i) {
      if (taken[i]) continue;
      adj[nb[i][0]].push_back({nb[i][1], i});
      adj[nb[i][1]].push_back({nb[i][0], i});
    }
    for (int j = 0; j < world.sellers; ++j) {
      if (!seller_alive[j] || comp_id[j] != -1 || adj[j].empty()) continue;
      Component comp;
      std::vector<int> stack{j};
      comp_id[j] = static_cast<int>(comps.size());
      std::vector<bool> buyer_in(world.buyers, false);
      while (!stack.empty()) {
        int u = stack.back();
        stack.pop_back();
        comp.sellers.push_back(u);
        for (auto [v, b] : adj[u]) {
          if (!buyer_in[b]) {
            buyer_in[b] = true;
            comp.buyers.push_back(b);
          }
          if (comp_id[v] == -1) {
            comp_id[v] = comp_id[j];
            stack.push_back(v);
          }
        }
      }
      comps.push_back(std::move(comp));
    }
    std::vector<int> bv = base;
    std::vector<const Component*> trees;
    for (const Component& comp : comps) {
      if (comp.buyers.size() >= comp.sellers.size()) {
        budget += static_cast<int>(comp.buyers.size()) -
                  static_cast<int>(comp.sellers.size());
        for (int b : comp.buyers) bv.push_back(b);
      } else {
        trees.push_back(&comp);
      }
    }
    std::sort(trees.begin(), trees.end(), [](const Component* a, const Component* b) {
      if (a->buyers.size() != b->buyers.size())
        return a->buyers.size() > b->buyers.size();
      return a->sellers.front() < b->sellers.front();
    });
    for (const Component* t : trees) {
      if (budget <= 0) break;
      --budget;
      for (int b : t->buyers) bv.push_back(b);
    }
    candidates.push_back(bv);
  }

  // (b) All buyer sets of size <= 2.
  for (int i = 0; i < world.buyers; ++i) {
    candidates.push_back({i});
    for (int k = i + 1; k < world.buyers; ++k) candidates.push_back({i, k});
  }

  // (c) All degree-0/1 buyers plus up to two degree-two buyers.
  {
    std::vector<int> low;
    std::vector<int> deg2;
    for (int i = 0; i < world.buyers; ++i)
      (nb[i].size() <= 1 ? low : deg2).push_back(i);
    candidates.push_back(low);
    for (std::size_t a = 0; a < deg2.size(); ++a) {
      auto one = low;
      one.push_back(deg2[a]);
      candidates.push_back(one);
      for (std::size_t b = a + 1; b < deg2.size(); ++b) {
        auto two = one;
        two.push_back(deg2[b]);
        candidates.push_back(two);
      }
    }
  }

  int best_units = 0;
  std::vector<int> best_bv;
  for (const auto& bv : candidates) {
    int units = bv.empty() ? 0 : shgb_units(world, bv);
    if (units > best_units) {
      best_units = units;
      best_bv = bv;
    }
  }
  EdgeSetRevenue out;
  if (best_units > 0) out.edges = shgb_realize(world, best_bv);
  out.revenue = platform_revenue_value(world, out.edges).first;
  return out;
}

// ---------------------------------------------------------------------------

EdgeSetRevenue homogeneous_extract(const BipartiteMarket& world) {
  if (!is_homogeneous(world))
    throw std::invalid_argument("requires homogeneous goods");
  auto [match, welfare] = max_weight_matching(world, world.world_edges);
  std::vector<bool> matched(world.buyers, false), sold(world.sellers, false);
  for (auto [i, j] : match.pairs) {
    matched[i] = true;
    sold[j] = true;
  }
  int k = std::min(world.buyers, world.sellers);
  std::vector<int> order = buyers_by_value(world);
  std::vector<bool> in_top(world.buyers, false);
  for (int t = 0; t < k; ++t) in_top[order[t]] = true;

  std::vector<int> incoming;  // top buyers, positive value, unmatched in M
  for (int t = 0; t < k; ++t) {
    int b = order[t];
    if (!matched[b] && buyer_value(world, b) > Rat(0)) incoming.push_back(b);
  }
  std::vector<int> freed;  // sellers of buyers matched in M but outside top
  for (int t = k; t < world.buyers; ++t) {
    int b = order[t];
    if (matched[b]) freed.push_back(*match.seller_of(b));
  }
  std::vector<int> unsold;
  for (int j = 0; j < world.sellers; ++j)
    if (!sold[j]) unsold.push_back(j);

  std::vector<int> targets = freed;
  targets.insert(targets.end(), unsold.begin(), unsold.end());
  std::vector<bool> taken(world.sellers, false);
  EdgeSet ep;
  for (int b : incoming) {
    for (int t : targets) {
      if (taken[t] || world.is_world_edge(b, t)) continue;
      taken[t] = true;
      ep.insert({b, t});
      break;
    }
  }
  EdgeSetRevenue out;
  out.edges = ep;
  out.revenue = platform_revenue_value(world, ep).first;
  return out;
}

EdgeSetRevenue single_pair_max_revenue(const BipartiteMarket& world, int buyer,
                                       int seller) {
  if (!is_homogeneous(world))
    throw std::invalid_argument("requires homogeneous goods");
  if (buyer < 0 || buyer >= world.buyers || seller < 0 ||
      seller >= world.sellers)
    throw std::invalid_argument("pair index out of range");
  if (world.is_world_edge(buyer, seller))
    throw std::invalid_argument("pair is already a world edge");

  int k = std::min(world.buyers, world.sellers);
  std::vector<int> order = buyers_by_value(world);
  std::vector<int> top(order.begin(), order.begin() + k);
  if (std::find(top.begin(), top.end(), buyer) == top.end()) {
    if (buyer_value(world, buyer) == buyer_value(world, top.back()))
      top.back() = buyer;  // tied with the cut; swap in deterministically
    else
      throw std::invalid_argument("buyer is not among the top-min(n,m)");
  }

  // Candidate floors: distinct top-buyer values, descending.
  std::vector<Rat> floors;
  for (int b : top) floors.push_back(buyer_value(world, b));
  std::sort(floors.begin(), floors.end(), std::greater<Rat>());
  floors.erase(std::unique(floors.begin(), floors.end()), floors.end());

  for (const Rat& floor : floors) {
    if (buyer_value(world, buyer) < floor) continue;
    // Eligible sub-market: top buyers at or above the floor, seller removed.
    std::vector<int> eligible;
    for (int b : top)
      if (buyer_value(world, b) >= floor) eligible.push_back(b);
    BipartiteMarket g;
    g.buyers = static_cast<int>(eligible.size());
    g.sellers = world.sellers;
    g.goods = world.goods;
    g.values.assign(g.buyers, std::vector<Rat>(g.sellers, Rat(0)));
    int bpos = -1;
    for (int a = 0; a < g.buyers; ++a) {
      if (eligible[a] == buyer) bpos = a;
      for (int j = 0; j < g.sellers; ++j)
        g.values[a][j] = buyer_value(world, eligible[a]);
    }
    for (auto [i, j] : world.world_edges) {
      if (j == seller) continue;
      auto it = std::find(eligible.begin(), eligible.end(), i);
      if (it != eligible.end())
        g.world_edges.insert(
            {static_cast<int>(it - eligible.begin()), j});
    }
    auto violator = vertex_hall_violator(g, bpos);
    if (!violator) continue;

    // Construct the achieving edges: the pair itself, the violator matched
    // into its neighborhood (largest buyers first), the rest of the top
    // buyers onto the remaining sellers.
    EdgeSet ep;
    ep.insert({buyer, seller});
    std::vector<int> bv;  // original indices, excluding `buyer`
    for (int a : violator->buyers)
      if (eligible[a] != buyer) bv.push_back(eligible[a]);
    std::stable_sort(bv.begin(), bv.end(), [&](int x, int y) {
      return buyer_value(world, x) > buyer_value(world, y);
    });
    std::vector<int> nbv;  // violator neighborhood in original seller indices
    for (int j : violator->neighborhood) nbv.push_back(j);
    std::vector<bool> used_b(world.buyers, false);
    used_b[buyer] = true;
    for (std::size_t t = 0; t < nbv.size() && t < bv.size(); ++t) {
      used_b[bv[t]] = true;
      if (!world.is_world_edge(bv[t], nbv[t])) ep.insert({bv[t], nbv[t]});
    }
    std::vector<bool> used_s(world.sellers, false);
    used_s[seller] = true;
    for (int j : nbv) used_s[j] = true;
    for (int b : top) {
      if (used_b[b]) continue;
      for (int j = 0; j < world.sellers; ++j) {
        if (used_s[j]) continue;
        used_s[j] = true;
        used_b[b] = true;
        if (!world.is_world_edge(b, j)) ep.insert({b, j});
        break;
      }
    }
    PlatformRevenueResult res = platform_revenue(world, ep);
    bool pair_transacts = false;
    for (auto [i, j] : res.transacting_platform_edges)
      if (i == buyer && j == seller) pair_transacts = true;
    if (pair_transacts && res.prices.p[seller] >= floor)
      return {ep, res.prices.p[seller]};
  }
  return {{}, Rat(0)};
}

}  // namespace marketgraph
