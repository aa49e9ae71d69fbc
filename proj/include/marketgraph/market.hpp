#pragma once

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "marketgraph/matching.hpp"
#include "marketgraph/rational.hpp"

namespace marketgraph {

enum class GoodsClass { General, Homogeneous, Identity };

std::string to_string(GoodsClass g);
GoodsClass goods_class_from_string(const std::string& s);

using EdgeSet = std::set<std::pair<int, int>>;

/// Unit-demand buyers, unit-supply sellers, exact rational valuations and a
/// world-edge set.  values[i][j] is buyer i's value for seller j's good.
struct BipartiteMarket {
  int buyers = 0;
  int sellers = 0;
  std::vector<std::vector<Rat>> values;
  EdgeSet world_edges;
  GoodsClass goods = GoodsClass::General;

  /// Throws std::invalid_argument when an invariant fails: index range,
  /// negative values, class/value mismatch.
  void validate() const;

  const Rat& value(int i, int j) const { return values[i][j]; }
  bool is_world_edge(int i, int j) const {
    return world_edges.count({i, j}) > 0;
  }
  EdgeSet complete_edges() const;
};

struct Matching {
  PairList pairs;  // sorted, each buyer/seller at most once

  std::optional<int> seller_of(int buyer) const;
  std::optional<int> buyer_of(int seller) const;
  /// Checks unit constraints and containment in `allowed`.
  void validate(const BipartiteMarket& m, const EdgeSet& allowed) const;
};

struct PriceVector {
  std::vector<Rat> p;
};

struct CompetitiveEquilibrium {
  Matching matching;
  PriceVector prices;
};

struct Violation {
  std::string condition;  // "feasibility", "unit", "envy", "negative-utility",
                          // "unsold-zero-price"
  int index = -1;
  std::string detail;
};

/// Maximum-weight matching within `edges`, deterministic lexicographic
/// tie-break.  Returns the matching and its weight.
std::pair<Matching, Rat> max_weight_matching(const BipartiteMarket& m,
                                             const EdgeSet& edges);

/// Weight of a maximum matching only (no tie-break work).
Rat max_weight_value(const BipartiteMarket& m, const EdgeSet& edges);

/// Maximum competitive prices via marginal contributions,
/// p_j = W(S) - W(S minus j).
PriceVector max_walrasian_prices(const BipartiteMarket& m, const EdgeSet& edges);

/// Minimum competitive prices via seller duplication,
/// p_j = W(S plus copy of j) - W(S).
PriceVector min_walrasian_prices(const BipartiteMarket& m, const EdgeSet& edges);

/// Empty list iff (matching, prices) is a competitive equilibrium on `edges`.
std::vector<Violation> verify_competitive_equilibrium(const BipartiteMarket& m,
                                                      const EdgeSet& edges,
                                                      const Matching& matching,
                                                      const PriceVector& prices);

struct OpportunityResult {
  std::vector<int> buyers;      // reachable buyers, including the start
  std::vector<int> sellers;     // sellers touched by the paths
  bool reaches_unsold = false;  // some reachable seller does not sell
  Rat price;                    // implied price of the start buyer's seller
};

/// Agents reachable by opportunity paths from `buyer` under `matching`.
/// Requires a homogeneous market and a matched start buyer.
OpportunityResult opportunity_reachable(const BipartiteMarket& m,
                                        const EdgeSet& edges,
                                        const Matching& matching, int buyer);

/// All seller prices derived from the opportunity-path rule (homogeneous
/// markets; unsold sellers get price zero).  Cheap path used by oracles.
PriceVector prices_by_opportunity(const BipartiteMarket& m, const EdgeSet& edges,
                                  const Matching& matching);

/// Convenience: dense solver instance for a market restricted to `edges`.
WeightedBipartite to_weighted(const BipartiteMarket& m, const EdgeSet& edges);

}  // namespace marketgraph
