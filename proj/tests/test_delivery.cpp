#include "doctest.h"

#include <random>

#include "marketgraph/delivery.hpp"
#include "marketgraph/instance_io.hpp"

namespace mg = marketgraph;
using mg::Allocation3;
using mg::Rat;
using mg::ThreeSidedMarket;

namespace {

ThreeSidedMarket tip_bad() { return *mg::generate("tip-bad", {}).three_sided; }

ThreeSidedMarket market_clearing(const std::string& kappa = "3") {
  return *mg::generate("market-clearing", {{"kappa", kappa}}).three_sided;
}

ThreeSidedMarket random_structured(std::mt19937_64& rng, bool store_split) {
  ThreeSidedMarket m;
  m.buyers = 1 + static_cast<int>(rng() % 4);
  m.stores = 1 + static_cast<int>(rng() % 4);
  m.couriers = 1 + static_cast<int>(rng() % 4);
  std::uniform_int_distribution<int> val(0, 8), c1(0, 3), c2(0, 3);
  m.value.assign(m.buyers, std::vector<Rat>(m.stores));
  for (auto& row : m.value)
    for (auto& v : row) v = Rat(val(rng), 2);
  std::vector<std::vector<Rat>> shared(m.buyers, std::vector<Rat>(m.stores));
  for (auto& row : shared)
    for (auto& v : row) v = Rat(c1(rng), 2);
  m.cost.assign(m.couriers, shared);
  for (int d = 0; d < m.couriers; ++d) {
    if (store_split) {
      for (int s = 0; s < m.stores; ++s) {
        Rat part(c2(rng), 2);
        for (int b = 0; b < m.buyers; ++b) m.cost[d][b][s] += part;
      }
    } else {
      for (int b = 0; b < m.buyers; ++b) {
        Rat part(c2(rng), 2);
        for (int s = 0; s < m.stores; ++s) m.cost[d][b][s] += part;
      }
    }
  }
  m.structure =
      store_split ? mg::CostStructure::StoreSplit : mg::CostStructure::BuyerSplit;
  m.validate();
  return m;
}

ThreeSidedMarket random_single_minded(std::mt19937_64& rng) {
  ThreeSidedMarket m;
  m.buyers = 1 + static_cast<int>(rng() % 4);
  m.stores = 1 + static_cast<int>(rng() % 4);
  m.couriers = 1 + static_cast<int>(rng() % 4);
  std::uniform_int_distribution<int> val(1, 8), cost(0, 5);
  m.value.assign(m.buyers, std::vector<Rat>(m.stores, Rat(0)));
  for (int b = 0; b < m.buyers; ++b)
    m.value[b][rng() % m.stores] = Rat(val(rng), 2);
  m.cost.assign(m.couriers,
                std::vector<std::vector<Rat>>(m.buyers,
                                              std::vector<Rat>(m.stores)));
  for (auto& per : m.cost)
    for (auto& row : per)
      for (auto& c : row) c = Rat(cost(rng), 2);
  m.structure = mg::CostStructure::SingleMinded;
  m.validate();
  return m;
}

}  // namespace

TEST_CASE("structure validation") {
  ThreeSidedMarket m = tip_bad();
  CHECK_NOTHROW(m.validate());
  m.structure = mg::CostStructure::BuyerSplit;
  // Costs 0/11 vs 1/12 also decompose per buyer (courier offset 1).
  CHECK_NOTHROW(m.validate());
  m.structure = mg::CostStructure::StoreSplit;
  m.cost[1][0][0] = Rat(2);  // break the per-store decomposition
  CHECK_THROWS_AS(m.validate(), std::invalid_argument);

  ThreeSidedMarket sm = market_clearing();
  sm.structure = mg::CostStructure::StoreSplit;
  CHECK_THROWS_AS(sm.validate(), std::invalid_argument);
}

TEST_CASE("courier plans on the tip figure") {
  ThreeSidedMarket m = tip_bad();
  mg::CourierPlan plan = mg::courier_plan_max(m, {{0, 0}});
  CHECK(plan.utility[0] == Rat(1));
  CHECK(plan.utility[1] == Rat(0));
  CHECK(plan.w[0][0] == Rat(1));
  CHECK(plan.w[1][0] == Rat(0));
  REQUIRE(plan.served.size() == 1);
  CHECK(plan.served[0] == std::array<int, 3>{0, 0, 0});

  // Empty order set: everything stays at zero.
  mg::CourierPlan empty = mg::courier_plan_max(m, {});
  for (const auto& row : empty.w)
    for (const auto& v : row) CHECK(v == Rat(0));

  CHECK_THROWS_AS(mg::courier_plan_max(m, {{0, 0}, {1, 0}}),
                  std::invalid_argument);
}

TEST_CASE("saturated courier plans use the padded utility formula") {
  // Two orders, two couriers: |orders| == couriers.
  ThreeSidedMarket m;
  m.buyers = m.stores = m.couriers = 2;
  m.value = {{Rat(4), Rat(0)}, {Rat(0), Rat(3)}};
  m.cost = {{{Rat(1), Rat(2)}, {Rat(2), Rat(1)}},
            {{Rat(2), Rat(1)}, {Rat(1), Rat(2)}}};
  std::vector<mg::Order> orders{{0, 0}, {1, 1}};
  mg::CourierPlan plan = mg::courier_plan_max(m, orders);

  // Independent evaluation of H + C_{omega-1}(G minus d) - C_omega(G).
  Rat h(0);
  for (const auto& row : m.value)
    for (const auto& v : row) h += v;
  for (const auto& per : m.cost)
    for (const auto& row : per)
      for (const auto& c : row) h += c;
  // Both covers of the two orders cost 1 + 2 = 3.  Dropping one order:
  // courier d1 alone serves either order at 2, courier d0 alone at 1.
  Rat cover(3);
  CHECK(plan.utility[0] == h + Rat(2) - cover);
  CHECK(plan.utility[1] == h + Rat(1) - cover);
  Rat maxv(4);
  CHECK(plan.utility[0] >= maxv);
  CHECK(plan.utility[1] >= maxv);
}

TEST_CASE("minimum tips on the tip figure") {
  ThreeSidedMarket m = tip_bad();
  mg::CourierPlan plan = mg::courier_plan_max(m, {{0, 0}});
  std::vector<std::vector<Rat>> zero_tips(2, std::vector<Rat>(1, Rat(0)));
  CHECK(mg::min_tip(m, plan.w, zero_tips, 1, 0) == Rat(12));
  CHECK(mg::min_tip(m, plan.w, zero_tips, 0, 0) == Rat(0));

  // Single courier, compensation covering cost, no competing orders.
  ThreeSidedMarket solo;
  solo.buyers = solo.stores = solo.couriers = 1;
  solo.value = {{Rat(5)}};
  solo.cost = {{{Rat(2)}}};
  std::vector<std::vector<Rat>> w{{Rat(3)}};
  std::vector<std::vector<Rat>> t{{Rat(0)}};
  CHECK(mg::min_tip(solo, w, t, 0, 0) == Rat(0));
}

TEST_CASE("allocation certification on the worked markets") {
  ThreeSidedMarket m = tip_bad();
  Allocation3 x;
  x.triples = {{0, 0, 0}};
  auto eq = mg::check_equilibrium_allocation(m, x);
  REQUIRE(eq.has_value());
  CHECK(eq->welfare == Rat(3));
  CHECK(!eq->couriers_rearranged);
  CHECK(mg::verify_equilibrium(m, eq->p, eq->w, eq->allocation, eq->t).empty());

  ThreeSidedMarket clearing = market_clearing();
  Allocation3 half;
  half.triples = {{0, 0, 0}};
  CHECK(!mg::check_equilibrium_allocation(clearing, half).has_value());

  // Any allocation that occupies every courier is supported.
  Allocation3 full;
  full.triples = {{0, 0, 0}, {1, 1, 1}};
  auto both = mg::check_equilibrium_allocation(clearing, full);
  REQUIRE(both.has_value());
  CHECK(both->welfare == Rat(2) - Rat(3));
  CHECK(
      mg::verify_equilibrium(clearing, both->p, both->w, both->allocation,
                             both->t)
          .empty());
}

TEST_CASE("definition checker on the tip figure equilibria") {
  ThreeSidedMarket m = tip_bad();
  Allocation3 x;
  x.triples = {{1, 0, 0}};  // courier d1 delivers to buyer b2
  std::vector<std::vector<Rat>> w{{Rat(0)}, {Rat(11)}};
  for (const Rat& price : {Rat(3), Rat(5), Rat(10)}) {
    CHECK(mg::verify_equilibrium(m, {price}, w, x, std::nullopt).empty());
    // The same tuple with zero tips is a with-tip equilibrium.
    std::vector<std::vector<Rat>> t{{Rat(0)}, {Rat(0)}};
    CHECK(mg::verify_equilibrium(m, {price}, w, x, t).empty());
  }
  CHECK(!mg::verify_equilibrium(m, {Rat(2)}, w, x, std::nullopt).empty());

  // Positive price on an unsold store.
  ThreeSidedMarket two = market_clearing();
  Allocation3 one;
  one.triples = {{0, 0, 0}};
  std::vector<std::vector<Rat>> w2(2, std::vector<Rat>(2, Rat(0)));
  auto violations =
      mg::verify_equilibrium(two, {Rat(0), Rat(1, 2)}, w2, one, std::nullopt);
  bool unsold = false;
  for (const auto& v : violations)
    unsold |= v.condition == "unsold-zero-price";
  CHECK(unsold);
}

TEST_CASE("flow welfare optimum on structured markets") {
  ThreeSidedMarket m = tip_bad();
  auto [alloc, welfare] = mg::optimal_welfare_structured(m);
  CHECK(welfare == Rat(3));
  REQUIRE(alloc.triples.size() == 1);
  CHECK(alloc.triples[0] == std::array<int, 3>{0, 0, 0});

  ThreeSidedMarket unit;
  unit.buyers = unit.stores = unit.couriers = 1;
  unit.value = {{Rat(7)}};
  unit.cost = {{{Rat(0)}}};
  unit.structure = mg::CostStructure::StoreSplit;
  CHECK(mg::optimal_welfare_structured(unit).second == Rat(7));

  std::mt19937_64 rng(61);
  for (int it = 0; it < 30; ++it) {
    ThreeSidedMarket r = random_structured(rng, it % 2 == 0);
    Rat flow = mg::optimal_welfare_structured(r).second;
    Rat brute = *mg::brute_force_3sided(r, mg::BruteMode3::OptWelfare).value;
    CHECK(flow == brute);
  }
}

TEST_CASE("flow welfare optimum for single-minded buyers") {
  ThreeSidedMarket m;
  m.buyers = m.stores = 1;
  m.couriers = 2;
  m.value = {{Rat(10)}};
  m.cost = {{{Rat(2)}}, {{Rat(5)}}};
  m.structure = mg::CostStructure::SingleMinded;
  auto [alloc, welfare] = mg::optimal_welfare_single_minded(m);
  CHECK(welfare == Rat(8));
  REQUIRE(alloc.triples.size() == 1);
  CHECK(alloc.triples[0] == std::array<int, 3>{0, 0, 0});

  // Value below every courier cost: the empty allocation wins.
  ThreeSidedMarket low = m;
  low.value = {{Rat(1)}};
  auto [empty_alloc, zero] = mg::optimal_welfare_single_minded(low);
  CHECK(zero == Rat(0));
  CHECK(empty_alloc.triples.empty());

  std::mt19937_64 rng(62);
  for (int it = 0; it < 30; ++it) {
    ThreeSidedMarket r = random_single_minded(rng);
    Rat flow = mg::optimal_welfare_single_minded(r).second;
    Rat brute = *mg::brute_force_3sided(r, mg::BruteMode3::OptWelfare).value;
    CHECK(flow == brute);
  }
}

TEST_CASE("efficient equilibria certify the flow optimum") {
  ThreeSidedMarket m = tip_bad();
  mg::SupportedEquilibrium eq = mg::efficient_with_tip_equilibrium(m);
  CHECK(eq.welfare == Rat(3));
  CHECK(mg::verify_equilibrium(m, eq.p, eq.w, eq.allocation, eq.t).empty());

  ThreeSidedMarket unit;
  unit.buyers = unit.stores = unit.couriers = 1;
  unit.value = {{Rat(7)}};
  unit.cost = {{{Rat(0)}}};
  unit.structure = mg::CostStructure::StoreSplit;
  mg::SupportedEquilibrium solo = mg::efficient_with_tip_equilibrium(unit);
  CHECK(solo.p[0] == Rat(7));
  for (const auto& row : solo.t)
    for (const auto& v : row) CHECK(v == Rat(0));

  std::mt19937_64 rng(63);
  for (int it = 0; it < 25; ++it) {
    ThreeSidedMarket r = it % 3 == 2 ? random_single_minded(rng)
                                     : random_structured(rng, it % 3 == 0);
    mg::SupportedEquilibrium cert = mg::efficient_with_tip_equilibrium(r);
    Rat brute = *mg::brute_force_3sided(r, mg::BruteMode3::OptWelfare).value;
    CHECK(cert.welfare == brute);
    CHECK(mg::verify_equilibrium(r, cert.p, cert.w, cert.allocation, cert.t)
              .empty());
  }
}

TEST_CASE("profit maximization with single-store couriers") {
  // One store with one courier of cost 2, buyers worth 5 and 3.
  ThreeSidedMarket m;
  m.buyers = 2;
  m.stores = 1;
  m.couriers = 1;
  m.value = {{Rat(5)}, {Rat(3)}};
  m.cost = {{{Rat(2)}, {Rat(2)}}};
  m.structure = mg::CostStructure::SingleStoreCouriers;
  m.courier_store = std::vector<int>{0};
  mg::ProfitResult r = mg::without_tip_profit_max(m);
  CHECK(r.p[0] == Rat(5));
  CHECK(r.w[0][0] == Rat(2));
  CHECK(r.profit == Rat(3));
  CHECK(*mg::brute_force_3sided(m, mg::BruteMode3::MaxProfit).value == Rat(3));
  CHECK(mg::verify_equilibrium(m, r.p, r.w, r.allocation, std::nullopt).empty());

  // Zero courier cost: the platform keeps the whole price.
  ThreeSidedMarket zero = m;
  zero.cost = {{{Rat(0)}, {Rat(0)}}};
  mg::ProfitResult rz = mg::without_tip_profit_max(zero);
  CHECK(rz.profit == rz.p[0]);

  // Two stores with distinct courier costs and symmetric buyers: the
  // perturbation picks the cheap store.
  ThreeSidedMarket two;
  two.buyers = 1;
  two.stores = 2;
  two.couriers = 2;
  two.value = {{Rat(6), Rat(6)}};
  two.cost = {{{Rat(3), Rat(0)}}, {{Rat(0), Rat(1)}}};
  two.structure = mg::CostStructure::SingleStoreCouriers;
  two.courier_store = std::vector<int>{0, 1};
  mg::ProfitResult rt = mg::without_tip_profit_max(two);
  REQUIRE(rt.allocation.triples.size() == 1);
  CHECK(rt.allocation.triples[0][1] == 1);  // cheaper store sells
  CHECK(*mg::brute_force_3sided(two, mg::BruteMode3::MaxProfit).value ==
        rt.profit);
}

TEST_CASE("brute force on the worked markets") {
  ThreeSidedMarket m = tip_bad();
  CHECK(*mg::brute_force_3sided(m, mg::BruteMode3::OptWelfare).value == Rat(3));
  CHECK(*mg::brute_force_3sided(m, mg::BruteMode3::BestWithoutTip).value ==
        Rat(-1));

  ThreeSidedMarket clearing = market_clearing();
  CHECK(*mg::brute_force_3sided(clearing, mg::BruteMode3::OptWelfare).value ==
        Rat(1));
  CHECK(*mg::brute_force_3sided(clearing, mg::BruteMode3::BestWithTip).value ==
        Rat(-1));

  ThreeSidedMarket nowt = *mg::generate("no-without-tip", {}).three_sided;
  CHECK(!mg::brute_force_3sided(nowt, mg::BruteMode3::BestWithoutTip)
             .value.has_value());
  CHECK(mg::brute_force_3sided(nowt, mg::BruteMode3::BestWithTip)
            .value.has_value());
}

TEST_CASE("property: without-tip equilibria survive the with-tip checks") {
  std::mt19937_64 rng(64);
  int verified = 0;
  for (int it = 0; it < 40; ++it) {
    ThreeSidedMarket m;
    m.buyers = 1 + static_cast<int>(rng() % 3);
    m.stores = 1 + static_cast<int>(rng() % 3);
    m.couriers = std::min(m.buyers, m.stores) + static_cast<int>(rng() % 2);
    std::uniform_int_distribution<int> val(0, 6), cost(0, 4);
    m.value.assign(m.buyers, std::vector<Rat>(m.stores));
    for (auto& row : m.value)
      for (auto& v : row) v = Rat(val(rng), 2);
    m.cost.assign(m.couriers,
                  std::vector<std::vector<Rat>>(
                      m.buyers, std::vector<Rat>(m.stores)));
    for (auto& per : m.cost)
      for (auto& row : per)
        for (auto& c : row) c = Rat(cost(rng), 2);

    // Existence with enough couriers: a without-tip equilibrium always turns
    // up in the enumeration.
    auto rep = mg::brute_force_3sided(m, mg::BruteMode3::BestWithoutTip);
    REQUIRE(rep.value.has_value());
    REQUIRE(rep.best.has_value());

    // Rebuild the explicit tuple: raw Walrasian prices plus the maximal
    // courier compensations for the chosen orders.
    mg::BipartiteMarket two;
    two.buyers = m.buyers;
    two.sellers = m.stores;
    two.values = m.value;
    std::vector<Rat> p = mg::max_walrasian_prices(two, two.complete_edges()).p;
    mg::CourierPlan plan = mg::courier_plan_max(m, rep.best->orders());
    Allocation3 x;
    x.triples = plan.served;
    std::sort(x.triples.begin(), x.triples.end());
    if (!mg::verify_equilibrium(m, p, plan.w, x, std::nullopt).empty())
      continue;  // enumeration may pick a tie the max prices cannot support
    ++verified;

    // Pareto: the same tuple passes with zero tips.
    std::vector<std::vector<Rat>> zero(m.buyers,
                                       std::vector<Rat>(m.stores, Rat(0)));
    CHECK(mg::verify_equilibrium(m, p, plan.w, x, zero).empty());

    // Compensation maximality is idempotent here by construction; fold a
    // tip-shifted variant back to zero tips.
    if (!x.triples.empty()) {
      auto [b, s, d] = x.triples[0];
      Rat tau = Rat::min(plan.w[b][s], Rat(1));
      if (tau > Rat(0) && p[s] >= Rat(0)) {
        auto w2 = plan.w;
        auto t2 = zero;
        auto p2 = p;
        w2[b][s] -= tau;
        t2[b][s] = tau;
        p2[s] = p[s];
        if (mg::verify_equilibrium(m, p2, w2, x, t2).empty()) {
          // Zero-tip folding: push the tip into price and compensation.
          auto p3 = p2;
          auto w3 = w2;
          p3[s] += Rat(0);  // prices stay; the tip folds into compensation
          w3[b][s] += t2[b][s];
          auto t3 = zero;
          CHECK(mg::verify_equilibrium(m, p3, w3, x, t3).empty());
        }
      }
    }
  }
  CHECK(verified >= 20);
}
