#include "marketgraph/fees.hpp"

#include <algorithm>
#include <stdexcept>

namespace marketgraph {

namespace {

std::vector<int> sorted_unique(std::vector<int> v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

bool contains(const std::vector<int>& v, int x) {
  return std::find(v.begin(), v.end(), x) != v.end();
}

std::vector<int> without(std::vector<int> v, int x) {
  v.erase(std::remove(v.begin(), v.end(), x), v.end());
  return v;
}

std::vector<int> with(std::vector<int> v, int x) {
  if (!contains(v, x)) v.push_back(x);
  return sorted_unique(std::move(v));
}

Rat seller_price(const BipartiteMarket& m, const std::vector<int>& P, int j) {
  return max_walrasian_prices(m, platform_graph(m, P)).p[j];
}

}  // namespace

EdgeSet platform_graph(const BipartiteMarket& m, const std::vector<int>& P) {
  EdgeSet edges = m.world_edges;
  for (int j : P) {
    if (j < 0 || j >= m.sellers)
      throw std::invalid_argument("platform seller out of range");
    for (int i = 0; i < m.buyers; ++i) edges.insert({i, j});
  }
  return edges;
}

OnOffPrices on_off_prices(const BipartiteMarket& m, const std::vector<int>& P,
                          int seller) {
  if (seller < 0 || seller >= m.sellers)
    throw std::invalid_argument("seller out of range");
  OnOffPrices res;
  res.p_on = seller_price(m, with(P, seller), seller);
  res.p_off = seller_price(m, without(P, seller), seller);
  return res;
}

std::vector<SellerGain> seller_gains(const BipartiteMarket& m, const Rat& alpha,
                                     const std::vector<int>& P) {
  std::vector<SellerGain> gains;
  for (int j = 0; j < m.sellers; ++j) {
    if (contains(P, j)) continue;
    OnOffPrices prices = on_off_prices(m, P, j);
    SellerGain g;
    g.seller = j;
    g.p_on = prices.p_on;
    g.p_off = prices.p_off;
    g.phi = (Rat(1) - alpha) * g.p_on - g.p_off;
    gains.push_back(g);
  }
  return gains;
}

std::vector<int> find_pure_equilibrium(const BipartiteMarket& m,
                                       const Rat& alpha) {
  if (m.goods != GoodsClass::Homogeneous && m.goods != GoodsClass::Identity)
    throw std::invalid_argument("requires homogeneous goods");
  if (alpha < Rat(0) || alpha > Rat(1))
    throw std::invalid_argument("fee outside [0,1]");
  std::vector<int> P;
  while (static_cast<int>(P.size()) < m.sellers) {
    std::vector<SellerGain> gains = seller_gains(m, alpha, P);
    const SellerGain* best = nullptr;
    for (const SellerGain& g : gains) {
      if (!best || g.phi > best->phi ||
          (g.phi == best->phi && g.p_off < best->p_off))
        best = &g;  // residual ties resolve to the lowest index by scan order
    }
    if (!best || best->phi < Rat(0)) break;
    P = with(std::move(P), best->seller);
  }
  return P;
}

std::vector<Violation> verify_platform_equilibrium(const BipartiteMarket& m,
                                                   const Rat& alpha,
                                                   const std::vector<int>& P) {
  std::vector<Violation> out;
  Rat keep = Rat(1) - alpha;
  for (int j = 0; j < m.sellers; ++j) {
    OnOffPrices prices = on_off_prices(m, P, j);
    if (contains(P, j)) {
      if (keep * prices.p_on < prices.p_off)
        out.push_back({"member-would-leave", j,
                       "(1-a)p_on=" + (keep * prices.p_on).str() +
                           " < p_off=" + prices.p_off.str()});
    } else {
      if (prices.p_off < keep * prices.p_on)
        out.push_back({"outsider-would-join", j,
                       "p_off=" + prices.p_off.str() +
                           " < (1-a)p_on=" + (keep * prices.p_on).str()});
    }
  }
  return out;
}

std::vector<SweepStep> sweep_alpha(const BipartiteMarket& m) {
  if (m.goods != GoodsClass::Homogeneous && m.goods != GoodsClass::Identity)
    throw std::invalid_argument("requires homogeneous goods");
  std::vector<SweepStep> steps;
  std::vector<int> P;
  Rat current(1);
  while (static_cast<int>(P.size()) < m.sellers) {
    std::vector<SellerGain> gains = seller_gains(m, Rat(0), P);
    // Breakpoint where phi reaches zero: alpha = 1 - p_off/p_on.  A seller
    // with no on-platform demand joins vacuously at the current fee.
    const SellerGain* best = nullptr;
    Rat best_alpha(0);
    for (const SellerGain& g : gains) {
      Rat a = g.p_on.is_zero() ? current : Rat(1) - g.p_off / g.p_on;
      if (a > current) a = current;
      if (!best || a > best_alpha ||
          (a == best_alpha && g.p_off < best->p_off))
        best = &g, best_alpha = a;
    }
    if (!best) break;
    P = with(std::move(P), best->seller);
    current = best_alpha;
    steps.push_back({best_alpha, best->seller, P});
  }
  return steps;
}

AuditResult best_response_audit(const BipartiteMarket& m, const Rat& alpha,
                                int max_iters) {
  if (max_iters < 1) throw std::invalid_argument("max_iters must be >= 1");
  AuditResult res;
  Rat keep = Rat(1) - alpha;
  std::vector<int> P;
  res.profiles.push_back(P);
  for (int iter = 0; iter < max_iters; ++iter) {
    int mover = -1;
    for (int j = 0; j < m.sellers && mover == -1; ++j) {
      OnOffPrices prices = on_off_prices(m, P, j);
      if (contains(P, j)) {
        if (prices.p_off > keep * prices.p_on) mover = j;
      } else {
        if (keep * prices.p_on > prices.p_off) mover = j;
      }
    }
    if (mover == -1) {
      res.converged = true;
      res.fixed_point = P;
      return res;
    }
    P = contains(P, mover) ? without(P, mover) : with(P, mover);
    auto seen = std::find(res.profiles.begin(), res.profiles.end(), P);
    if (seen != res.profiles.end()) {
      res.cycle.assign(seen, res.profiles.end());
      res.profiles.push_back(P);
      return res;
    }
    res.profiles.push_back(P);
  }
  return res;
}

RevenuePoa platform_revenue_and_poa(const BipartiteMarket& m, const Rat& alpha,
                                    const std::vector<int>& P) {
  RevenuePoa res;
  EdgeSet edges = platform_graph(m, P);
  PriceVector prices = max_walrasian_prices(m, edges);
  res.revenue = Rat(0);
  for (int j : sorted_unique(P)) res.revenue += prices.p[j];
  res.revenue *= alpha;
  res.welfare = max_weight_value(m, edges);
  res.optimal_welfare = max_weight_value(m, m.complete_edges());
  if (!res.welfare.is_zero()) res.poa = res.optimal_welfare / res.welfare;
  return res;
}

}  // namespace marketgraph
