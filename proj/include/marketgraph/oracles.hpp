#pragma once

#include <vector>

#include "marketgraph/market.hpp"
#include "marketgraph/rational.hpp"

namespace marketgraph {

struct PlatformEqEnum {
  std::vector<std::vector<int>> equilibria;  // every verified on-platform set
  int examined = 0;
};

/// Checks all 2^m on-platform sets against the equilibrium conditions.
PlatformEqEnum platform_eq_enum(const BipartiteMarket& m, const Rat& alpha,
                                int max_sellers = 12);

struct EdgesEnum {
  Rat best_revenue;
  std::vector<EdgeSet> argmax;  // distinct platform sets achieving the best
  long long examined = 0;
};

/// Unrestricted enumeration over subsets of non-world pairs (the strongest
/// oracle; guarded by buyers*sellers <= max_pairs).
EdgesEnum enum_platform_edges_subsets(const BipartiteMarket& world,
                                      int max_pairs = 20);

/// All-transacting enumeration: complete assignments of the smaller side,
/// platform edges read off the assignment.  Prices use the opportunity-path
/// rule on homogeneous goods and marginal values otherwise.  Guarded by
/// min(n,m) <= max_side.
EdgesEnum enum_platform_edges_transact(const BipartiteMarket& world,
                                       int max_side = 9);

struct BundleEnum {
  std::vector<int> best_subset;  // indices into the input quality vector
  double profit = 0.0;
  bool contiguous_value = false;  // best profit matches a contiguous window
  long long examined = 0;
};

/// All 2^N bundles (N <= max_n), and whether the optimum is contiguous in
/// sorted quality up to value ties.
BundleEnum bundle_enum(const std::vector<double>& qualities, double sigma,
                       int max_n = 12);

}  // namespace marketgraph
