#pragma once

#include <optional>
#include <vector>

#include "marketgraph/market.hpp"

namespace marketgraph {

/// Platform edges must be disjoint from world edges.
void validate_platform_edges(const BipartiteMarket& world, const EdgeSet& ep);

struct PlatformRevenueResult {
  Rat revenue;
  Rat welfare;
  PairList transacting_platform_edges;
  Matching matching;   // revenue-favoring tie-break, then lex-smallest
  PriceVector prices;  // max competitive prices of the platform graph
};

/// Clears G_w plus E_p at maximum competitive prices; among max-weight
/// matchings picks one maximizing total price over platform edges (realized
/// as a lexicographic two-component weight), then the lex-smallest pair set.
PlatformRevenueResult platform_revenue(const BipartiteMarket& world,
                                       const EdgeSet& ep);

/// Revenue and welfare only; skips the lex tie-break pass.
std::pair<Rat, Rat> platform_revenue_value(const BipartiteMarket& world,
                                           const EdgeSet& ep);

struct GreedyConversion {
  EdgeSet kept;          // best prefix of the removal schedule
  Rat revenue;           // revenue of `kept`
  Rat delta_welfare;     // W(G_w + E_p) - W(G_w) of the input set
  std::vector<Rat> revenue_trace;  // revenue after each removal round
};

/// Iteratively removes the minimum-revenue platform edge, keeping the best
/// intermediate set (guarantees revenue >= delta_welfare / H_k).
GreedyConversion greedy_welfare_to_revenue(const BipartiteMarket& world,
                                           const EdgeSet& ep);

struct EdgeSetRevenue {
  EdgeSet edges;
  Rat revenue;
};

/// Revenue-optimal platform edges for single-world-seller homogeneous
/// markets: n!=m reductions, seller-subgraph decomposition, and the DP over
/// contiguous cycles of length <= 3 plus at most one contiguous chain.
EdgeSetRevenue swsh_optimal(const BipartiteMarket& world);

/// Revenue-optimal platform edges for sparse identity-goods markets with
/// buyer degree <= 2 (peeling plus component selection plus the small-case
/// enumerations).
EdgeSetRevenue shgb_optimal(const BipartiteMarket& world);

struct SurplusSet {
  std::vector<int> buyers;        // B_v
  std::vector<int> neighborhood;  // N(B_v) via world edges
  int k_v = 0;                    // max matching size between B_v and N(B_v)
                                  // through complement (non-world) pairs
  int deficiency = 0;             // max(|B_v| - |N(B_v)|, 0)
};

SurplusSet surplus_set_of(const BipartiteMarket& world,
                          const std::vector<int>& buyers);

/// Buyers reachable by alternating paths from the unmatched side of a maximum
/// matching; deficiency equals |B| - matching size.
SurplusSet max_diff_hall_violator(const BipartiteMarket& world);

/// Hall violator containing `buyer`, if any: remove the buyer and its
/// neighborhood and solve max-difference with threshold |N(buyer)|.
std::optional<SurplusSet> vertex_hall_violator(const BipartiteMarket& world,
                                               int buyer);

/// Monopolize-or-complete construction extracting at least W* - W(G_w) in
/// homogeneous markets.
EdgeSetRevenue homogeneous_extract(const BipartiteMarket& world);

/// Best revenue from the single transaction (buyer, seller), scanning
/// candidate prices downward and testing vertex Hall violators.
EdgeSetRevenue single_pair_max_revenue(const BipartiteMarket& world, int buyer,
                                       int seller);

}  // namespace marketgraph
