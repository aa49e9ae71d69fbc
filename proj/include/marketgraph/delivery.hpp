#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "marketgraph/market.hpp"
#include "marketgraph/rational.hpp"

namespace marketgraph {

enum class CostStructure {
  General,
  StoreSplit,     // c_d(b,s) = c(b,s) + c_d(s)
  BuyerSplit,     // c_d(b,s) = c(b,s) + c_d(b)
  SingleMinded,   // each buyer values at most one store positively
  SingleStoreCouriers,
};

std::string to_string(CostStructure c);
CostStructure cost_structure_from_string(const std::string& s);

using Order = std::pair<int, int>;  // (buyer, store)

/// Three-sided delivery market: unit-demand buyers, unit-supply stores,
/// unit-capacity couriers.  Store costs are normalized to zero.
struct ThreeSidedMarket {
  int buyers = 0;
  int stores = 0;
  int couriers = 0;
  std::vector<std::vector<Rat>> value;            // [buyer][store]
  std::vector<std::vector<std::vector<Rat>>> cost;  // [courier][buyer][store]
  CostStructure structure = CostStructure::General;
  std::optional<std::vector<int>> courier_store;  // single-store couriers

  bool available(int d, [[maybe_unused]] int b, int s) const {
    return !courier_store || (*courier_store)[d] == s;
  }
  /// Validates dimensions, nonnegativity, and the declared structure against
  /// the tensors.  Throws std::invalid_argument on failure.
  void validate() const;
};

struct Allocation3 {
  std::vector<std::array<int, 3>> triples;  // (buyer, store, courier)

  void validate(const ThreeSidedMarket& m) const;
  std::vector<Order> orders() const;
  Rat welfare(const ThreeSidedMarket& m) const;
};

struct TipState {
  std::vector<Rat> p;                // per store
  std::vector<std::vector<Rat>> w;   // [buyer][store]
  std::vector<std::vector<Rat>> t;   // [buyer][store]
};

struct CourierPlan {
  std::vector<std::vector<Rat>> w;          // maximal compensations
  std::vector<std::array<int, 3>> served;   // (buyer, store, courier)
  std::vector<Rat> utility;                 // per courier
  Rat cover_cost;                           // C_Omega(G_D)
};

/// Minimum tip for buyer b to have some courier deliver (b, s), given
/// compensations and the other buyers' tips.
Rat min_tip(const ThreeSidedMarket& m, const std::vector<std::vector<Rat>>& w,
            const std::vector<std::vector<Rat>>& tips_others, int b, int s);

/// Maximal-compensation courier plan serving exactly `orders`.
CourierPlan courier_plan_max(const ThreeSidedMarket& m,
                             const std::vector<Order>& orders);

struct SupportedEquilibrium {
  std::vector<Rat> p;
  std::vector<std::vector<Rat>> w;
  std::vector<std::vector<Rat>> t;  // all zero
  Allocation3 allocation;           // couriers set to the min-cost cover
  bool couriers_rearranged = false;
  Rat welfare;
};

/// Tests whether the allocation's order set is supported by some with-tip
/// equilibrium (max-weight test in the tip-adjusted buyer-store graph) and
/// returns a supporting certificate.  The certificate's courier assignment is
/// the minimum-cost cover, which may rearrange x's couriers.
std::optional<SupportedEquilibrium> check_equilibrium_allocation(
    const ThreeSidedMarket& m, const Allocation3& x);

/// Without-tip check when `tips` is absent, with-tip otherwise.
std::vector<Violation> verify_equilibrium(
    const ThreeSidedMarket& m, const std::vector<Rat>& p,
    const std::vector<std::vector<Rat>>& w, const Allocation3& x,
    const std::optional<std::vector<std::vector<Rat>>>& tips);

/// Min-cost-flow welfare optimum for store-split or buyer-split costs.
std::pair<Allocation3, Rat> optimal_welfare_structured(
    const ThreeSidedMarket& m);

/// Min-cost-flow welfare optimum when each buyer values one store positively.
std::pair<Allocation3, Rat> optimal_welfare_single_minded(
    const ThreeSidedMarket& m);

/// Welfare-optimal allocation certified as a with-tip equilibrium.
SupportedEquilibrium efficient_with_tip_equilibrium(const ThreeSidedMarket& m);

struct ProfitResult {
  std::vector<Rat> p;
  std::vector<std::vector<Rat>> w;
  Allocation3 allocation;
  Rat profit;
  Rat epsilon;  // perturbation actually used
};

/// Profit-maximizing without-tip equilibrium for single-store-courier
/// markets (perturbed Walrasian allocation, max prices, min compensations).
ProfitResult without_tip_profit_max(const ThreeSidedMarket& m);

enum class BruteMode3 { OptWelfare, BestWithTip, BestWithoutTip, MaxProfit };

struct BruteForce3Report {
  BruteMode3 mode;
  std::optional<Rat> value;          // absent = no equilibrium of that kind
  std::optional<Allocation3> best;   // an argmax allocation when one exists
  int examined = 0;
};

/// Exhaustive enumeration over buyer-store matchings with min-cost courier
/// covers; guarded by buyers*stores*couriers <= 64.
BruteForce3Report brute_force_3sided(const ThreeSidedMarket& m, BruteMode3 mode);

}  // namespace marketgraph
