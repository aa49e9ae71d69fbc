#include "marketgraph/delivery.hpp"

#include <algorithm>
#include <stdexcept>

#include "marketgraph/flow.hpp"

namespace marketgraph {

std::string to_string(CostStructure c) {
  switch (c) {
    case CostStructure::General: return "general";
    case CostStructure::StoreSplit: return "store_split";
    case CostStructure::BuyerSplit: return "buyer_split";
    case CostStructure::SingleMinded: return "single_minded_buyers";
    case CostStructure::SingleStoreCouriers: return "single_store_couriers";
  }
  return "general";
}

CostStructure cost_structure_from_string(const std::string& s) {
  if (s == "general") return CostStructure::General;
  if (s == "store_split") return CostStructure::StoreSplit;
  if (s == "buyer_split") return CostStructure::BuyerSplit;
  if (s == "single_minded_buyers") return CostStructure::SingleMinded;
  if (s == "single_store_couriers") return CostStructure::SingleStoreCouriers;
  throw std::invalid_argument("unknown cost structure: " + s);
}

void ThreeSidedMarket::validate() const {
  if (buyers < 0 || stores < 0 || couriers < 0)
    throw std::invalid_argument("negative market size");
  if (static_cast<int>(value.size()) != buyers)
    throw std::invalid_argument("value rows != buyers");
  for (const auto& row : value) {
    if (static_cast<int>(row.size()) != stores)
      throw std::invalid_argument("value cols != stores");
    for (const auto& v : row)
      if (v < Rat(0)) throw std::invalid_argument("negative valuation");
  }
  if (static_cast<int>(cost.size()) != couriers)
    throw std::invalid_argument("cost tensor couriers mismatch");
  for (const auto& per_b : cost) {
    if (static_cast<int>(per_b.size()) != buyers)
      throw std::invalid_argument("cost tensor buyers mismatch");
    for (const auto& row : per_b) {
      if (static_cast<int>(row.size()) != stores)
        throw std::invalid_argument("cost tensor stores mismatch");
      for (const auto& c : row)
        if (c < Rat(0)) throw std::invalid_argument("negative cost");
    }
  }
  if (courier_store) {
    if (static_cast<int>(courier_store->size()) != couriers)
      throw std::invalid_argument("courier_store length mismatch");
    for (int s : *courier_store)
      if (s < 0 || s >= stores)
        throw std::invalid_argument("courier_store index out of range");
  }
  switch (structure) {
    case CostStructure::StoreSplit:
      for (int d = 0; d < couriers; ++d)
        for (int b = 0; b < buyers; ++b)
          for (int s = 0; s < stores; ++s)
            if (cost[d][b][s] - cost[d][0][s] != cost[0][b][s] - cost[0][0][s])
              throw std::invalid_argument(
                  "costs do not decompose as c(b,s) + c_d(s)");
      break;
    case CostStructure::BuyerSplit:
      for (int d = 0; d < couriers; ++d)
        for (int b = 0; b < buyers; ++b)
          for (int s = 0; s < stores; ++s)
            if (cost[d][b][s] - cost[d][b][0] != cost[0][b][s] - cost[0][b][0])
              throw std::invalid_argument(
                  "costs do not decompose as c(b,s) + c_d(b)");
      break;
    case CostStructure::SingleMinded:
      for (const auto& row : value) {
        int positives = 0;
        for (const auto& v : row)
          if (v > Rat(0)) ++positives;
        if (positives > 1)
          throw std::invalid_argument("buyer values more than one store");
      }
      break;
    case CostStructure::SingleStoreCouriers:
      if (!courier_store)
        throw std::invalid_argument(
            "single_store_couriers requires courier_store");
      break;
    case CostStructure::General:
      break;
  }
}

void Allocation3::validate(const ThreeSidedMarket& m) const {
  std::vector<bool> b(m.buyers, false), s(m.stores, false), d(m.couriers, false);
  for (auto [bi, si, di] : triples) {
    if (bi < 0 || bi >= m.buyers || si < 0 || si >= m.stores || di < 0 ||
        di >= m.couriers)
      throw std::invalid_argument("allocation index out of range");
    if (b[bi] || s[si] || d[di])
      throw std::invalid_argument("allocation reuses an agent");
    if (!m.available(di, bi, si))
      throw std::invalid_argument("courier cannot serve this order");
    b[bi] = s[si] = d[di] = true;
  }
}

std::vector<Order> Allocation3::orders() const {
  std::vector<Order> o;
  for (auto [b, s, d] : triples) o.push_back({b, s});
  std::sort(o.begin(), o.end());
  return o;
}

Rat Allocation3::welfare(const ThreeSidedMarket& m) const {
  Rat w(0);
  for (auto [b, s, d] : triples) w += m.value[b][s] - m.cost[d][b][s];
  return w;
}

namespace {

// Minimum-cost matching covering `orders` (or all but `slack` of them) in the
// order-courier graph, optionally excluding one courier.
struct CoverResult {
  bool feasible = false;
  Rat cost;
  std::vector<int> courier_of;  // per order index, -1 if dropped
};

CoverResult min_cost_cover(const ThreeSidedMarket& m,
                           const std::vector<Order>& orders, int skip_courier,
                           int drop) {
  const int k = static_cast<int>(orders.size());
  // nodes: source, orders, couriers, sink
  MinCostFlow net(2 + k + m.couriers);
  int source = 0, sink = 1 + k + m.couriers;
  std::vector<std::vector<int>> arc(k, std::vector<int>(m.couriers, -1));
  for (int o = 0; o < k; ++o) net.add_edge(source, 1 + o, 1, Rat(0));
  for (int o = 0; o < k; ++o) {
    auto [b, s] = orders[o];
    for (int d = 0; d < m.couriers; ++d) {
      if (d == skip_courier || !m.available(d, b, s)) continue;
      arc[o][d] = net.add_edge(1 + o, 1 + k + d, 1, m.cost[d][b][s]);
    }
  }
  for (int d = 0; d < m.couriers; ++d)
    net.add_edge(1 + k + d, sink, 1, Rat(0));
  auto sol = net.solve(source, sink, k - drop);
  CoverResult res;
  res.feasible = sol.feasible;
  if (!res.feasible) return res;
  res.cost = sol.cost;
  res.courier_of.assign(k, -1);
  for (int o = 0; o < k; ++o)
    for (int d = 0; d < m.couriers; ++d)
      if (arc[o][d] != -1 && net.flow_on(arc[o][d]) == 1) res.courier_of[o] = d;
  return res;
}

Rat tensor_h(const ThreeSidedMarket& m) {
  Rat h(0);
  for (int b = 0; b < m.buyers; ++b)
    for (int s = 0; s < m.stores; ++s) h += m.value[b][s];
  for (int d = 0; d < m.couriers; ++d)
    for (int b = 0; b < m.buyers; ++b)
      for (int s = 0; s < m.stores; ++s)
        if (m.available(d, b, s)) h += m.cost[d][b][s];
  return h;
}

void check_orders(const ThreeSidedMarket& m, const std::vector<Order>& orders) {
  std::vector<bool> b(m.buyers, false), s(m.stores, false);
  for (auto [bi, si] : orders) {
    if (bi < 0 || bi >= m.buyers || si < 0 || si >= m.stores)
      throw std::invalid_argument("order index out of range");
    if (b[bi] || s[si])
      throw std::invalid_argument("orders are not buyer- and store-disjoint");
    b[bi] = s[si] = true;
  }
  if (static_cast<int>(orders.size()) > m.couriers)
    throw std::invalid_argument("more orders than couriers");
}

}  // namespace

CourierPlan courier_plan_max(const ThreeSidedMarket& m,
                             const std::vector<Order>& orders) {
  check_orders(m, orders);
  const int k = static_cast<int>(orders.size());
  CourierPlan plan;
  plan.w.assign(m.buyers, std::vector<Rat>(m.stores, Rat(0)));
  plan.utility.assign(m.couriers, Rat(0));
  if (k == 0) return plan;

  CoverResult base = min_cost_cover(m, orders, -1, 0);
  if (!base.feasible)
    throw std::invalid_argument("orders cannot all be served");
  plan.cover_cost = base.cost;

  for (int d = 0; d < m.couriers; ++d) {
    if (k < m.couriers) {
      CoverResult without = min_cost_cover(m, orders, d, 0);
      if (!without.feasible)
        throw std::invalid_argument(
            "maximum compensation is unbounded without courier " +
            std::to_string(d));
      plan.utility[d] = without.cost - base.cost;
    } else {
      CoverResult without = min_cost_cover(m, orders, d, 1);
      if (!without.feasible)
        throw std::invalid_argument(
            "maximum compensation is unbounded without courier " +
            std::to_string(d));
      plan.utility[d] = tensor_h(m) + without.cost - base.cost;
    }
  }
  for (int o = 0; o < k; ++o) {
    auto [b, s] = orders[o];
    int d = base.courier_of[o];
    plan.served.push_back({b, s, d});
    plan.w[b][s] = plan.utility[d] + m.cost[d][b][s];
  }
  return plan;
}

Rat min_tip(const ThreeSidedMarket& m, const std::vector<std::vector<Rat>>& w,
            const std::vector<std::vector<Rat>>& tips_others, int b, int s) {
  std::optional<Rat> best;
  for (int d = 0; d < m.couriers; ++d) {
    if (!m.available(d, b, s)) continue;
    Rat need = Rat::max(Rat(0), m.cost[d][b][s] - w[b][s]);
    for (int b2 = 0; b2 < m.buyers; ++b2)
      for (int s2 = 0; s2 < m.stores; ++s2) {
        if (b2 == b && s2 == s) continue;
        if (!m.available(d, b2, s2)) continue;
        Rat tip = b2 == b ? Rat(0) : tips_others[b2][s2];
        need = Rat::max(need, w[b2][s2] + tip - m.cost[d][b2][s2] - w[b][s] +
                                  m.cost[d][b][s]);
      }
    best = best ? Rat::min(*best, need) : need;
  }
  if (!best)
    throw std::invalid_argument("no courier can deliver this order");
  return *best;
}

namespace {

// Tip-adjusted buyer-store graph weights for an order set.
std::vector<std::vector<Rat>> adjusted_values(const ThreeSidedMarket& m,
                                              const CourierPlan& plan,
                                              const std::vector<Order>& orders) {
  auto in_orders = [&](int b, int s) {
    return std::find(orders.begin(), orders.end(), Order{b, s}) != orders.end();
  };
  std::vector<std::vector<Rat>> adj(m.buyers, std::vector<Rat>(m.stores));
  for (int b = 0; b < m.buyers; ++b)
    for (int s = 0; s < m.stores; ++s) {
      if (in_orders(b, s)) {
        adj[b][s] = m.value[b][s];
        continue;
      }
      std::optional<Rat> tip;
      for (int d = 0; d < m.couriers; ++d) {
        if (!m.available(d, b, s)) continue;
        Rat cand = m.cost[d][b][s] + plan.utility[d];
        tip = tip ? Rat::min(*tip, cand) : cand;
      }
      if (!tip) {
        adj[b][s] = Rat(-1);  // unreachable order: strictly unattractive
        continue;
      }
      adj[b][s] = m.value[b][s] - *tip;
    }
  return adj;
}

// Max-weight matching value over a dense rational matrix, negative entries
// treated as non-edges; optionally returns prices of a max CE.
struct TwoSided {
  BipartiteMarket market;
  EdgeSet edges;
};

TwoSided to_two_sided(const std::vector<std::vector<Rat>>& weights) {
  TwoSided t;
  t.market.buyers = static_cast<int>(weights.size());
  t.market.sellers =
      t.market.buyers == 0 ? 0 : static_cast<int>(weights[0].size());
  t.market.values.assign(t.market.buyers,
                         std::vector<Rat>(t.market.sellers, Rat(0)));
  for (int b = 0; b < t.market.buyers; ++b)
    for (int s = 0; s < t.market.sellers; ++s) {
      if (weights[b][s] < Rat(0)) continue;
      t.market.values[b][s] = weights[b][s];
      t.edges.insert({b, s});
    }
  return t;
}

}  // namespace

std::optional<SupportedEquilibrium> check_equilibrium_allocation(
    const ThreeSidedMarket& m, const Allocation3& x) {
  x.validate(m);
  std::vector<Order> orders = x.orders();
  CourierPlan plan = courier_plan_max(m, orders);

  std::vector<std::vector<Rat>> adj = adjusted_values(m, plan, orders);
  TwoSided g = to_two_sided(adj);
  Rat best = max_weight_value(g.market, g.edges);
  Rat mine(0);
  for (auto [b, s] : orders) mine += adj[b][s];
  if (mine != best) return std::nullopt;

  SupportedEquilibrium eq;
  eq.p = max_walrasian_prices(g.market, g.edges).p;
  eq.w = plan.w;
  eq.t.assign(m.buyers, std::vector<Rat>(m.stores, Rat(0)));
  eq.allocation.triples = plan.served;
  std::sort(eq.allocation.triples.begin(), eq.allocation.triples.end());
  Allocation3 sorted_x = x;
  std::sort(sorted_x.triples.begin(), sorted_x.triples.end());
  eq.couriers_rearranged = sorted_x.triples != eq.allocation.triples;
  eq.welfare = eq.allocation.welfare(m);
  return eq;
}

std::vector<Violation> verify_equilibrium(
    const ThreeSidedMarket& m, const std::vector<Rat>& p,
    const std::vector<std::vector<Rat>>& w, const Allocation3& x,
    const std::optional<std::vector<std::vector<Rat>>>& tips) {
  std::vector<Violation> out;
  x.validate(m);
  if (static_cast<int>(p.size()) != m.stores) {
    out.push_back({"dimension", -1, "price vector length"});
    return out;
  }
  std::vector<int> store_of(m.buyers, -1), courier_of(m.buyers, -1);
  std::vector<int> order_b(m.couriers, -1), order_s(m.couriers, -1);
  std::vector<bool> store_sold(m.stores, false);
  for (auto [b, s, d] : x.triples) {
    store_of[b] = s;
    courier_of[b] = d;
    order_b[d] = b;
    order_s[d] = s;
    store_sold[s] = true;
  }

  auto zero = std::vector<std::vector<Rat>>(m.buyers,
                                            std::vector<Rat>(m.stores, Rat(0)));
  const auto& t = tips ? *tips : zero;

  // Stores not bought from have zero price; undelivered orders carry zero
  // compensation (and zero tips in the with-tip regime).
  for (int s = 0; s < m.stores; ++s)
    if (!store_sold[s] && !p[s].is_zero())
      out.push_back({"unsold-zero-price", s, "price " + p[s].str()});
  for (int b = 0; b < m.buyers; ++b)
    for (int s = 0; s < m.stores; ++s) {
      if (store_of[b] == s) continue;
      if (!w[b][s].is_zero())
        out.push_back(
            {"undelivered-zero-compensation", b,
             "order (" + std::to_string(b) + "," + std::to_string(s) + ")"});
      if (tips && !t[b][s].is_zero())
        out.push_back(
            {"undelivered-zero-tip", b,
             "order (" + std::to_string(b) + "," + std::to_string(s) + ")"});
    }

  // Courier best responses (tips enter utilities when present).
  for (int d = 0; d < m.couriers; ++d) {
    std::optional<Rat> top;
    for (int b = 0; b < m.buyers; ++b)
      for (int s = 0; s < m.stores; ++s) {
        if (!m.available(d, b, s)) continue;
        Rat u = w[b][s] + t[b][s] - m.cost[d][b][s];
        if (!top || u > *top) top = u;
      }
    Rat best = top ? Rat::max(*top, Rat(0)) : Rat(0);
    Rat mine(0);
    if (order_b[d] != -1)
      mine = w[order_b[d]][order_s[d]] + t[order_b[d]][order_s[d]] -
             m.cost[d][order_b[d]][order_s[d]];
    if (order_b[d] == -1) {
      if (best > Rat(0))
        out.push_back({"courier-best-response", d, "idle courier would deliver"});
    } else if (mine < best) {
      out.push_back({"courier-best-response", d,
                     "delivers at utility " + mine.str() + " < best " +
                         best.str()});
    }
  }

  // Buyer best responses.
  for (int b = 0; b < m.buyers; ++b) {
    std::vector<Rat> util(m.stores);
    bool any = false;
    for (int s = 0; s < m.stores; ++s) {
      Rat tip(0);
      if (tips) {
        std::optional<Rat> cand;
        for (int d = 0; d < m.couriers; ++d) {
          if (!m.available(d, b, s)) continue;
          Rat need = Rat::max(Rat(0), m.cost[d][b][s] - w[b][s]);
          for (int b2 = 0; b2 < m.buyers; ++b2)
            for (int s2 = 0; s2 < m.stores; ++s2) {
              if (b2 == b && s2 == s) continue;
              if (!m.available(d, b2, s2)) continue;
              Rat t2 = b2 == b ? Rat(0) : t[b2][s2];
              need = Rat::max(need, w[b2][s2] + t2 - m.cost[d][b2][s2] -
                                        w[b][s] + m.cost[d][b][s]);
            }
          cand = cand ? Rat::min(*cand, need) : need;
        }
        if (!cand) {
          util[s] = Rat(-1);
          continue;
        }
        tip = *cand;
        if (store_of[b] == s && t[b][s] != tip)
          out.push_back({"tip-not-minimum", b,
                         "pays " + t[b][s].str() + " needs " + tip.str()});
      }
      util[s] = m.value[b][s] - p[s] - tip;
      if (util[s] > Rat(0)) any = true;
    }
    if (store_of[b] == -1) {
      if (any)
        out.push_back({"buyer-best-response", b, "buyer would rather buy"});
    } else {
      Rat mine = util[store_of[b]];
      if (any) {
        for (int s = 0; s < m.stores; ++s)
          if (util[s] > mine) {
            out.push_back({"buyer-best-response", b,
                           "prefers store " + std::to_string(s)});
            break;
          }
      } else if (!mine.is_zero()) {
        out.push_back({"buyer-best-response", b,
                       "buys at nonzero utility with no positive option"});
      }
    }
  }
  return out;
}

namespace {

std::pair<Allocation3, Rat> structured_flow(const ThreeSidedMarket& m,
                                            bool store_split) {
  // Decomposition components (courier 0 anchors the shared part).
  auto shared = [&](int b, int s) { return m.cost[0][b][s]; };
  auto courier_part = [&](int d, int b, int s) {
    return store_split ? m.cost[d][0][s] - m.cost[0][0][s]
                       : m.cost[d][b][0] - m.cost[0][b][0];
  };
  const int B = m.buyers, S = m.stores, D = m.couriers;
  // store-split:  source -> buyer -> order -> store_in -> store_out ->
  //               courier -> sink
  // buyer-split:  source -> courier -> buyer_in -> buyer_out -> order ->
  //               store -> sink
  int base_b = 1, base_b2 = base_b + B, base_o = base_b2 + B,
      base_si = base_o + B * S, base_so = base_si + S, base_d = base_so + S;
  int sink = base_d + D, nodes = sink + 1;
  MinCostFlow net(nodes);
  std::vector<int> order_arc(B * S, -1);
  std::vector<std::vector<int>> serve_arc;
  if (store_split) {
    for (int b = 0; b < B; ++b) net.add_edge(0, base_b + b, 1, Rat(0));
    for (int b = 0; b < B; ++b)
      for (int s = 0; s < S; ++s) {
        order_arc[b * S + s] = net.add_edge(base_b + b, base_o + b * S + s, 1,
                                            shared(b, s) - m.value[b][s]);
        net.add_edge(base_o + b * S + s, base_si + s, 1, Rat(0));
      }
    for (int s = 0; s < S; ++s)
      net.add_edge(base_si + s, base_so + s, 1, Rat(0));
    serve_arc.assign(S, std::vector<int>(D, -1));
    for (int s = 0; s < S; ++s)
      for (int d = 0; d < D; ++d)
        serve_arc[s][d] =
            net.add_edge(base_so + s, base_d + d, 1, courier_part(d, 0, s));
    for (int d = 0; d < D; ++d) net.add_edge(base_d + d, sink, 1, Rat(0));
  } else {
    for (int d = 0; d < D; ++d) net.add_edge(0, base_d + d, 1, Rat(0));
    serve_arc.assign(B, std::vector<int>(D, -1));
    for (int d = 0; d < D; ++d)
      for (int b = 0; b < B; ++b)
        serve_arc[b][d] =
            net.add_edge(base_d + d, base_b + b, 1, courier_part(d, b, 0));
    for (int b = 0; b < B; ++b)
      net.add_edge(base_b + b, base_b2 + b, 1, Rat(0));
    for (int b = 0; b < B; ++b)
      for (int s = 0; s < S; ++s) {
        order_arc[b * S + s] = net.add_edge(base_b2 + b, base_o + b * S + s, 1,
                                            shared(b, s) - m.value[b][s]);
        net.add_edge(base_o + b * S + s, base_so + s, 1, Rat(0));
      }
    for (int s = 0; s < S; ++s) net.add_edge(base_so + s, sink, 1, Rat(0));
  }
  net.solve_best_prefix(0, sink, std::min({B, S, D}));

  Allocation3 alloc;
  for (int b = 0; b < B; ++b)
    for (int s = 0; s < S; ++s) {
      if (net.flow_on(order_arc[b * S + s]) != 1) continue;
      int courier = -1;
      if (store_split) {
        for (int d = 0; d < D; ++d)
          if (net.flow_on(serve_arc[s][d]) == 1) courier = d;
      } else {
        for (int d = 0; d < D; ++d)
          if (net.flow_on(serve_arc[b][d]) == 1) courier = d;
      }
      if (courier == -1)
        throw std::logic_error("structured flow lost a courier");
      alloc.triples.push_back({b, s, courier});
    }
  std::sort(alloc.triples.begin(), alloc.triples.end());
  return {alloc, alloc.welfare(m)};
}

}  // namespace

std::pair<Allocation3, Rat> optimal_welfare_structured(
    const ThreeSidedMarket& m) {
  if (m.structure != CostStructure::StoreSplit &&
      m.structure != CostStructure::BuyerSplit)
    throw std::invalid_argument("requires store_split or buyer_split costs");
  m.validate();
  return structured_flow(m, m.structure == CostStructure::StoreSplit);
}

std::pair<Allocation3, Rat> optimal_welfare_single_minded(
    const ThreeSidedMarket& m) {
  for (const auto& row : m.value) {
    int positives = 0;
    for (const auto& v : row)
      if (v > Rat(0)) ++positives;
    if (positives != 1)
      throw std::invalid_argument("each buyer must value exactly one store");
  }
  const int B = m.buyers, S = m.stores, D = m.couriers;
  std::vector<int> minded(B);
  for (int b = 0; b < B; ++b)
    for (int s = 0; s < S; ++s)
      if (m.value[b][s] > Rat(0)) minded[b] = s;
  // nodes: source, stores, buyers(order nodes), couriers, sink
  int base_s = 1, base_b = base_s + S, base_d = base_b + B;
  int sink = base_d + D;
  MinCostFlow net(sink + 1);
  for (int s = 0; s < S; ++s) net.add_edge(0, base_s + s, 1, Rat(0));
  std::vector<int> order_arc(B);
  for (int b = 0; b < B; ++b)
    order_arc[b] = net.add_edge(base_s + minded[b], base_b + b, 1, Rat(0));
  std::vector<std::vector<int>> serve_arc(B, std::vector<int>(D, -1));
  for (int b = 0; b < B; ++b)
    for (int d = 0; d < D; ++d) {
      if (!m.available(d, b, minded[b])) continue;
      serve_arc[b][d] = net.add_edge(
          base_b + b, base_d + d, 1, m.cost[d][b][minded[b]] - m.value[b][minded[b]]);
    }
  for (int d = 0; d < D; ++d) net.add_edge(base_d + d, sink, 1, Rat(0));
  net.solve_best_prefix(0, sink, std::min({B, S, D}));

  Allocation3 alloc;
  for (int b = 0; b < B; ++b) {
    if (net.flow_on(order_arc[b]) != 1) continue;
    for (int d = 0; d < D; ++d)
      if (serve_arc[b][d] != -1 && net.flow_on(serve_arc[b][d]) == 1)
        alloc.triples.push_back({b, minded[b], d});
  }
  std::sort(alloc.triples.begin(), alloc.triples.end());
  return {alloc, alloc.welfare(m)};
}

SupportedEquilibrium efficient_with_tip_equilibrium(const ThreeSidedMarket& m) {
  std::pair<Allocation3, Rat> opt;
  if (m.structure == CostStructure::StoreSplit ||
      m.structure == CostStructure::BuyerSplit)
    opt = optimal_welfare_structured(m);
  else if (m.structure == CostStructure::SingleMinded)
    opt = optimal_welfare_single_minded(m);
  else
    throw std::invalid_argument(
        "requires structured costs or single-minded buyers");
  auto eq = check_equilibrium_allocation(m, opt.first);
  if (!eq)
    throw std::logic_error(
        "welfare-optimal allocation failed equilibrium certification");
  if (eq->welfare != opt.second)
    throw std::logic_error("certified welfare differs from flow optimum");
  return *eq;
}

ProfitResult without_tip_profit_max(const ThreeSidedMarket& m) {
  if (m.structure != CostStructure::SingleStoreCouriers || !m.courier_store)
    throw std::invalid_argument("requires single-store couriers");
  m.validate();
  std::vector<std::vector<int>> per_store(m.stores);
  for (int d = 0; d < m.couriers; ++d)
    per_store[(*m.courier_store)[d]].push_back(d);
  for (int s = 0; s < m.stores; ++s)
    if (per_store[s].empty())
      throw std::invalid_argument("store " + std::to_string(s) +
                                  " has no courier");

  // Minimum courier cost per order and the perturbation scale.
  std::vector<std::vector<Rat>> mc(m.buyers, std::vector<Rat>(m.stores));
  Rat maxc(0), total_cost(0);
  for (int b = 0; b < m.buyers; ++b)
    for (int s = 0; s < m.stores; ++s) {
      std::optional<Rat> best;
      for (int d : per_store[s]) {
        if (!best || m.cost[d][b][s] < *best) best = m.cost[d][b][s];
        maxc = Rat::max(maxc, m.cost[d][b][s]);
        total_cost += m.cost[d][b][s];
      }
      mc[b][s] = *best;
    }
  std::optional<Rat> minv;
  for (const auto& row : m.value)
    for (const auto& v : row)
      if (v > Rat(0) && (!minv || v < *minv)) minv = v;

  ProfitResult res;
  res.w.assign(m.buyers, std::vector<Rat>(m.stores, Rat(0)));
  res.epsilon = minv ? *minv / (Rat(1) + total_cost) : Rat(0);

  // Perturbed buyer-store market over the positive-value pairs; the
  // perturbation selects the cost-minimizing Walrasian optimum.
  BipartiteMarket two;
  two.buyers = m.buyers;
  two.sellers = m.stores;
  two.values.assign(m.buyers, std::vector<Rat>(m.stores, Rat(0)));
  EdgeSet edges;
  for (int b = 0; b < m.buyers; ++b)
    for (int s = 0; s < m.stores; ++s) {
      if (m.value[b][s].is_zero()) continue;
      two.values[b][s] = m.value[b][s] + res.epsilon * (maxc - mc[b][s]);
      edges.insert({b, s});
    }
  Matching match = max_weight_matching(two, edges).first;

  // Prices come from the unperturbed buyer-store market.
  BipartiteMarket raw = two;
  for (int b = 0; b < m.buyers; ++b)
    for (int s = 0; s < m.stores; ++s)
      raw.values[b][s] = m.value[b][s];
  res.p = max_walrasian_prices(raw, raw.complete_edges()).p;

  res.profit = Rat(0);
  std::vector<bool> courier_used(m.couriers, false);
  for (auto [b, s] : match.pairs) {
    int courier = -1;
    for (int d : per_store[s])
      if (!courier_used[d] && m.cost[d][b][s] == mc[b][s]) {
        courier = d;
        break;
      }
    if (courier == -1) throw std::logic_error("no courier for executed order");
    courier_used[courier] = true;
    res.allocation.triples.push_back({b, s, courier});
    res.w[b][s] = mc[b][s];
    res.profit += res.p[s] - mc[b][s];
  }
  std::sort(res.allocation.triples.begin(), res.allocation.triples.end());
  return res;
}

BruteForce3Report brute_force_3sided(const ThreeSidedMarket& m,
                                     BruteMode3 mode) {
  if (m.buyers * m.stores * m.couriers > 64)
    throw std::invalid_argument(
        "instance exceeds the buyers*stores*couriers <= 64 oracle guard");
  m.validate();
  BruteForce3Report rep;
  rep.mode = mode;

  // Prices of the raw buyer-store market (shared by all without-tip
  // equilibria) and its optimum, for the without-tip modes.
  BipartiteMarket two;
  two.buyers = m.buyers;
  two.sellers = m.stores;
  two.values = m.value;
  Rat raw_best = max_weight_value(two, two.complete_edges());
  PriceVector raw_prices = max_walrasian_prices(two, two.complete_edges());

  // Enumerate buyer-store matchings; couriers follow as min-cost covers.
  std::vector<Order> orders;
  std::vector<bool> store_used(m.stores, false);

  auto consider = [&](auto&& self, int b) -> void {
    if (b == m.buyers) {
      ++rep.examined;
      if (static_cast<int>(orders.size()) > m.couriers) return;
      CoverResult cover = min_cost_cover(m, orders, -1, 0);
      if (!cover.feasible) return;
      Rat total_value(0);
      for (auto [bb, ss] : orders) total_value += m.value[bb][ss];
      Rat welfare = total_value - cover.cost;
      Allocation3 alloc;
      for (std::size_t o = 0; o < orders.size(); ++o)
        alloc.triples.push_back(
            {orders[o].first, orders[o].second, cover.courier_of[o]});
      std::sort(alloc.triples.begin(), alloc.triples.end());

      std::optional<Rat> score;
      switch (mode) {
        case BruteMode3::OptWelfare:
          score = welfare;
          break;
        case BruteMode3::BestWithTip: {
          if (check_equilibrium_allocation(m, alloc)) score = welfare;
          break;
        }
        case BruteMode3::BestWithoutTip:
        case BruteMode3::MaxProfit: {
          // Buyer side must be a Walrasian allocation of the raw market.
          if (total_value != raw_best) break;
          if (mode == BruteMode3::BestWithoutTip) {
            score = welfare;
            break;
          }
          // Least supportable compensations, maximized over all min-cost
          // courier covers for this order set.
          std::optional<Rat> best_profit;
          std::vector<int> assign(orders.size(), -1);
          std::vector<bool> used(m.couriers, false);
          auto assign_rec = [&](auto&& rec, std::size_t o, Rat acc) -> void {
            if (o == orders.size()) {
              if (acc != cover.cost) return;
              std::vector<Rat> wv;
              for (std::size_t q = 0; q < orders.size(); ++q) {
                auto [bb, ss] = orders[q];
                wv.push_back(m.cost[assign[q]][bb][ss]);
              }
              bool changed = true;
              int guard = 0;
              while (changed) {
                if (++guard > 10000)
                  throw std::logic_error("compensation fixpoint did not settle");
                changed = false;
                for (std::size_t q = 0; q < orders.size(); ++q) {
                  int d = assign[q];
                  auto [bb, ss] = orders[q];
                  for (std::size_t q2 = 0; q2 < orders.size(); ++q2) {
                    if (q2 == q) continue;
                    auto [b2, s2] = orders[q2];
                    if (!m.available(d, b2, s2)) continue;
                    Rat need = wv[q2] - m.cost[d][b2][s2] + m.cost[d][bb][ss];
                    if (need > wv[q]) {
                      wv[q] = need;
                      changed = true;
                    }
                  }
                }
              }
              for (int d = 0; d < m.couriers; ++d) {
                if (std::find(assign.begin(), assign.end(), d) != assign.end())
                  continue;
                for (std::size_t q = 0; q < orders.size(); ++q) {
                  auto [bb, ss] = orders[q];
                  if (m.available(d, bb, ss) && wv[q] > m.cost[d][bb][ss])
                    throw std::logic_error(
                        "least compensation exceeded idle bound");
                }
              }
              Rat profit(0);
              for (std::size_t q = 0; q < orders.size(); ++q)
                profit += raw_prices.p[orders[q].second] - wv[q];
              if (!best_profit || profit > *best_profit) best_profit = profit;
              return;
            }
            auto [bb, ss] = orders[o];
            for (int d = 0; d < m.couriers; ++d) {
              if (used[d] || !m.available(d, bb, ss)) continue;
              used[d] = true;
              assign[o] = d;
              rec(rec, o + 1, acc + m.cost[d][bb][ss]);
              assign[o] = -1;
              used[d] = false;
            }
          };
          assign_rec(assign_rec, 0, Rat(0));
          score = best_profit;
          break;
        }
      }
      if (score && (!rep.value || *score > *rep.value)) {
        rep.value = *score;
        rep.best = alloc;
      }
      return;
    }
    self(self, b + 1);  // buyer b does not buy
    for (int s = 0; s < m.stores; ++s) {
      if (store_used[s]) continue;
      store_used[s] = true;
      orders.push_back({b, s});
      self(self, b + 1);
      orders.pop_back();
      store_used[s] = false;
    }
  };
  consider(consider, 0);
  return rep;
}

}  // namespace marketgraph
