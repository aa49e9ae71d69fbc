#include "marketgraph/market.hpp"

#include <algorithm>
#include <queue>
#include <stdexcept>

namespace marketgraph {

std::string to_string(GoodsClass g) {
  switch (g) {
    case GoodsClass::General: return "general";
    case GoodsClass::Homogeneous: return "homogeneous";
    case GoodsClass::Identity: return "identity";
  }
  return "general";
}

GoodsClass goods_class_from_string(const std::string& s) {
  if (s == "general") return GoodsClass::General;
  if (s == "homogeneous") return GoodsClass::Homogeneous;
  if (s == "identity") return GoodsClass::Identity;
  throw std::invalid_argument("unknown goods class: " + s);
}

void BipartiteMarket::validate() const {
  if (buyers < 0 || sellers < 0)
    throw std::invalid_argument("negative market size");
  if (static_cast<int>(values.size()) != buyers)
    throw std::invalid_argument("values row count != buyers");
  for (const auto& row : values) {
    if (static_cast<int>(row.size()) != sellers)
      throw std::invalid_argument("values column count != sellers");
    for (const auto& v : row)
      if (v < Rat(0)) throw std::invalid_argument("negative valuation");
  }
  for (auto [i, j] : world_edges)
    if (i < 0 || i >= buyers || j < 0 || j >= sellers)
      throw std::invalid_argument("world edge index out of range");
  if (goods == GoodsClass::Homogeneous) {
    for (int i = 0; i < buyers; ++i)
      for (int j = 1; j < sellers; ++j)
        if (values[i][j] != values[i][0])
          throw std::invalid_argument("homogeneous market with non-constant row");
  }
  if (goods == GoodsClass::Identity) {
    std::optional<Rat> c;
    for (const auto& row : values)
      for (const auto& v : row) {
        if (v.is_zero()) continue;
        if (!c) c = v;
        if (v != *c)
          throw std::invalid_argument("identity market with unequal values");
      }
  }
}

EdgeSet BipartiteMarket::complete_edges() const {
  EdgeSet e;
  for (int i = 0; i < buyers; ++i)
    for (int j = 0; j < sellers; ++j) e.insert({i, j});
  return e;
}

std::optional<int> Matching::seller_of(int buyer) const {
  for (auto [i, j] : pairs)
    if (i == buyer) return j;
  return std::nullopt;
}

std::optional<int> Matching::buyer_of(int seller) const {
  for (auto [i, j] : pairs)
    if (j == seller) return i;
  return std::nullopt;
}

void Matching::validate(const BipartiteMarket& m, const EdgeSet& allowed) const {
  std::vector<bool> b(m.buyers, false), s(m.sellers, false);
  for (auto [i, j] : pairs) {
    if (i < 0 || i >= m.buyers || j < 0 || j >= m.sellers)
      throw std::invalid_argument("matching index out of range");
    if (b[i] || s[j]) throw std::invalid_argument("matching reuses an agent");
    if (allowed.count({i, j}) == 0)
      throw std::invalid_argument("matching uses a non-edge");
    b[i] = s[j] = true;
  }
}

WeightedBipartite to_weighted(const BipartiteMarket& m, const EdgeSet& edges) {
  WeightedBipartite g(m.buyers, m.sellers);
  for (auto [i, j] : edges) {
    if (i < 0 || i >= m.buyers || j < 0 || j >= m.sellers)
      throw std::invalid_argument("edge index out of range");
    g.weight[i][j] = WeightPair{m.values[i][j]};
  }
  return g;
}

std::pair<Matching, Rat> max_weight_matching(const BipartiteMarket& m,
                                             const EdgeSet& edges) {
  WeightedBipartite g = to_weighted(m, edges);
  WeightPair value;
  Matching match;
  match.pairs = lex_min_max_weight_matching(g, &value);
  return {match, value.primary};
}

Rat max_weight_value(const BipartiteMarket& m, const EdgeSet& edges) {
  return max_weight_value(to_weighted(m, edges)).primary;
}

PriceVector max_walrasian_prices(const BipartiteMarket& m,
                                 const EdgeSet& edges) {
  WeightedBipartite g = to_weighted(m, edges);
  Rat total = max_weight_value(g).primary;
  PriceVector prices;
  prices.p.reserve(m.sellers);
  for (int j = 0; j < m.sellers; ++j) {
    WeightedBipartite h = g;
    for (int i = 0; i < m.buyers; ++i) h.weight[i][j].reset();
    prices.p.push_back(total - max_weight_value(h).primary);
  }
  return prices;
}

PriceVector min_walrasian_prices(const BipartiteMarket& m,
                                 const EdgeSet& edges) {
  WeightedBipartite g = to_weighted(m, edges);
  Rat total = max_weight_value(g).primary;
  PriceVector prices;
  prices.p.reserve(m.sellers);
  for (int j = 0; j < m.sellers; ++j) {
    WeightedBipartite h(m.buyers, m.sellers + 1);
    h.weight = g.weight;
    for (auto& row : h.weight) row.emplace_back();
    for (int i = 0; i < m.buyers; ++i) h.weight[i][m.sellers] = g.weight[i][j];
    prices.p.push_back(max_weight_value(h).primary - total);
  }
  return prices;
}

std::vector<Violation> verify_competitive_equilibrium(
    const BipartiteMarket& m, const EdgeSet& edges, const Matching& matching,
    const PriceVector& prices) {
  std::vector<Violation> out;
  if (static_cast<int>(prices.p.size()) != m.sellers) {
    out.push_back({"dimension", -1, "price vector length != sellers"});
    return out;
  }
  std::vector<bool> bseen(m.buyers, false), sseen(m.sellers, false);
  for (auto [i, j] : matching.pairs) {
    if (i < 0 || i >= m.buyers || j < 0 || j >= m.sellers) {
      out.push_back({"feasibility", i, "pair index out of range"});
      return out;
    }
    if (edges.count({i, j}) == 0)
      out.push_back({"feasibility", i,
                     "pair (" + std::to_string(i) + "," + std::to_string(j) +
                         ") is not an available edge"});
    if (bseen[i]) out.push_back({"unit", i, "buyer matched twice"});
    if (sseen[j]) out.push_back({"unit", j, "seller sold twice"});
    bseen[i] = sseen[j] = true;
  }
  for (int j = 0; j < m.sellers; ++j) {
    if (prices.p[j] < Rat(0))
      out.push_back({"negative-price", j, "price below zero"});
    if (!sseen[j] && !prices.p[j].is_zero())
      out.push_back({"unsold-zero-price", j,
                     "unsold seller has price " + prices.p[j].str()});
  }
  for (int i = 0; i < m.buyers; ++i) {
    Rat utility(0);
    if (auto j = matching.seller_of(i)) utility = m.values[i][*j] - prices.p[*j];
    if (utility < Rat(0))
      out.push_back({"negative-utility", i,
                     "buyer utility " + utility.str() + " below zero"});
    for (auto [bi, j] : edges) {
      if (bi != i) continue;
      if (m.values[i][j] - prices.p[j] > utility) {
        out.push_back({"envy", i,
                       "buyer prefers seller " + std::to_string(j) + " (gain " +
                           (m.values[i][j] - prices.p[j]).str() + ")"});
        break;
      }
    }
  }
  return out;
}

namespace {

// The price rule needs a scalar per buyer: every nonzero entry of a row must
// agree (covers homogeneous goods and the v_i-on-desired-pairs figures).
bool per_buyer_scalar_values(const BipartiteMarket& m) {
  if (m.goods == GoodsClass::Homogeneous || m.goods == GoodsClass::Identity)
    return true;
  for (const auto& row : m.values) {
    std::optional<Rat> v;
    for (const auto& x : row) {
      if (x.is_zero()) continue;
      if (!v) v = x;
      if (x != *v) return false;
    }
  }
  return true;
}

}  // namespace

OpportunityResult opportunity_reachable(const BipartiteMarket& m,
                                        const EdgeSet& edges,
                                        const Matching& matching, int buyer) {
  if (!per_buyer_scalar_values(m))
    throw std::invalid_argument("opportunity paths require homogeneous goods");
  if (buyer < 0 || buyer >= m.buyers)
    throw std::invalid_argument("buyer index out of range");
  if (!matching.seller_of(buyer))
    throw std::invalid_argument("no transaction: buyer is unmatched");

  std::vector<int> seller_of(m.buyers, -1), buyer_of(m.sellers, -1);
  for (auto [i, j] : matching.pairs) {
    seller_of[i] = j;
    buyer_of[j] = i;
  }

  OpportunityResult res;
  std::vector<bool> bseen(m.buyers, false), sseen(m.sellers, false);
  std::queue<int> frontier;
  frontier.push(buyer);
  bseen[buyer] = true;
  while (!frontier.empty()) {
    int i = frontier.front();
    frontier.pop();
    res.buyers.push_back(i);
    for (auto [bi, j] : edges) {
      if (bi != i || seller_of[i] == j) continue;  // non-transacting edges only
      if (!sseen[j]) {
        sseen[j] = true;
        res.sellers.push_back(j);
        if (buyer_of[j] == -1) res.reaches_unsold = true;
      }
      if (buyer_of[j] != -1 && !bseen[buyer_of[j]]) {
        bseen[buyer_of[j]] = true;
        frontier.push(buyer_of[j]);
      }
    }
  }
  std::sort(res.buyers.begin(), res.buyers.end());
  std::sort(res.sellers.begin(), res.sellers.end());
  if (res.reaches_unsold) {
    res.price = Rat(0);
  } else {
    // Every reached buyer transacts; its scalar value sits on the matched
    // edge.
    res.price = m.values[buyer][seller_of[buyer]];
    for (int i : res.buyers)
      res.price = Rat::min(res.price, m.values[i][seller_of[i]]);
  }
  return res;
}

PriceVector prices_by_opportunity(const BipartiteMarket& m, const EdgeSet& edges,
                                  const Matching& matching) {
  PriceVector prices;
  prices.p.assign(m.sellers, Rat(0));
  for (auto [i, j] : matching.pairs)
    prices.p[j] = opportunity_reachable(m, edges, matching, i).price;
  return prices;
}

}  // namespace marketgraph
