#pragma once

#include <optional>
#include <vector>

#include "marketgraph/market.hpp"

namespace marketgraph {

/// World edges plus complete edges for every seller in P.
EdgeSet platform_graph(const BipartiteMarket& m, const std::vector<int>& P);

struct OnOffPrices {
  Rat p_on;   // max price of j in G(P plus j)
  Rat p_off;  // max price of j in G(P minus j)
};

OnOffPrices on_off_prices(const BipartiteMarket& m, const std::vector<int>& P,
                          int seller);

struct SellerGain {
  int seller = -1;
  Rat p_on;
  Rat p_off;
  Rat phi;  // (1-alpha)*p_on - p_off
};

/// One pass of the greedy equilibrium construction: gains of all sellers
/// outside P at fee alpha, given P on platform.
std::vector<SellerGain> seller_gains(const BipartiteMarket& m, const Rat& alpha,
                                     const std::vector<int>& P);

/// Greedy fixed-fee equilibrium for homogeneous-goods markets.  Adds the
/// argmax-gain seller each round (ties: minimum off price, then lowest index)
/// while the best gain stays nonnegative.
std::vector<int> find_pure_equilibrium(const BipartiteMarket& m,
                                       const Rat& alpha);

/// Empty iff P is a pure equilibrium at fee alpha: members weakly prefer to
/// stay, outsiders weakly prefer to stay out.
std::vector<Violation> verify_platform_equilibrium(const BipartiteMarket& m,
                                                   const Rat& alpha,
                                                   const std::vector<int>& P);

struct SweepStep {
  Rat alpha;           // breakpoint at which `joined` enters
  int joined = -1;     // seller added at this breakpoint
  std::vector<int> P;  // equilibrium set from this fee downward
};

/// Fee sweep from 1 down to 0 for homogeneous markets; every emitted (alpha,
/// P) is an equilibrium on its interval and sets grow by one seller.
std::vector<SweepStep> sweep_alpha(const BipartiteMarket& m);

struct AuditResult {
  bool converged = false;
  std::vector<int> fixed_point;                 // when converged
  std::vector<std::vector<int>> profiles;       // visited profiles, in order
  std::vector<std::vector<int>> cycle;          // repeated segment if cyclic
};

/// Single-seller best-response dynamics from the empty profile, lowest-index
/// deviator first.  Stops at a fixed point, the first repeated profile, or
/// after max_iters moves.
AuditResult best_response_audit(const BipartiteMarket& m, const Rat& alpha,
                                int max_iters);

struct RevenuePoa {
  Rat revenue;
  Rat welfare;
  Rat optimal_welfare;
  std::optional<Rat> poa;  // nullopt encodes the +infinity sentinel
};

RevenuePoa platform_revenue_and_poa(const BipartiteMarket& m, const Rat& alpha,
                                    const std::vector<int>& P);

}  // namespace marketgraph
