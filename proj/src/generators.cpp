#include <stdexcept>

#include "marketgraph/instance_io.hpp"

namespace marketgraph {

namespace {

Rat param_rat(const std::map<std::string, std::string>& p,
              const std::string& key, const Rat& fallback) {
  auto it = p.find(key);
  if (it == p.end()) return fallback;
  try {
    return Rat::parse(it->second);
  } catch (const std::exception& e) {
    throw ParseError("param " + key + ": " + e.what());
  }
}

int param_int(const std::map<std::string, std::string>& p,
              const std::string& key, int fallback) {
  auto it = p.find(key);
  if (it == p.end()) return fallback;
  try {
    return std::stoi(it->second);
  } catch (const std::exception&) {
    throw ParseError("param " + key + ": expected an integer");
  }
}

BipartiteMarket homogeneous_market(const std::vector<Rat>& buyer_values,
                                   int sellers) {
  BipartiteMarket m;
  m.buyers = static_cast<int>(buyer_values.size());
  m.sellers = sellers;
  m.goods = GoodsClass::Homogeneous;
  m.values.assign(m.buyers, std::vector<Rat>(sellers));
  for (int i = 0; i < m.buyers; ++i)
    for (int j = 0; j < sellers; ++j) m.values[i][j] = buyer_values[i];
  return m;
}

}  // namespace

Instance generate(const std::string& id,
                  const std::map<std::string, std::string>& params) {
  Instance inst;
  inst.name = id;
  if (id == "no-pure") {
    // Four buyers, three sellers; direct links worth 1 and the off-link
    // values 3.05, 1.15, 1.1, 0.05 that make best responses cycle at fee 1/2.
    BipartiteMarket m;
    m.buyers = 4;
    m.sellers = 3;
    m.values.assign(4, std::vector<Rat>(3, Rat(0)));
    m.values[0][0] = Rat(1);
    m.values[1][1] = Rat(1);
    m.values[2][2] = Rat(1);
    m.values[1][0] = Rat(61, 20);
    m.values[1][2] = Rat(23, 20);
    m.values[2][1] = Rat(11, 10);
    m.values[3][2] = Rat(1, 20);
    m.world_edges = {{0, 0}, {1, 1}, {2, 2}};
    inst.kind = InstanceKind::Bipartite;
    inst.description = "no pure platform equilibrium at fee 1/2";
    inst.bipartite = m;
  } else if (id == "logn") {
    int n = param_int(params, "n", 3);
    Rat eps = param_rat(params, "eps", Rat(1, 100));
    if (n < 1) throw ParseError("param n: must be >= 1");
    std::vector<Rat> values;
    values.push_back(Rat(n) + eps);
    for (int i = 2; i <= n; ++i) values.push_back(Rat(n) / Rat(i));
    BipartiteMarket m = homogeneous_market(values, n);
    inst.kind = InstanceKind::Bipartite;
    inst.description = "harmonic price-of-anarchy market, no world edges";
    inst.bipartite = m;
  } else if (id == "tight-poa") {
    Rat alpha = param_rat(params, "alpha", Rat(1, 2));
    Rat eps = param_rat(params, "eps", Rat(1, 100));
    if (alpha < Rat(0) || alpha >= Rat(1))
      throw ParseError("param alpha: needs 0 <= alpha < 1");
    Rat t = (Rat(2) - alpha) / (Rat(1) - alpha) - eps;
    BipartiteMarket m;
    m.buyers = m.sellers = 3;
    m.values.assign(3, std::vector<Rat>(3, Rat(0)));
    for (int i = 0; i < 3; ++i) m.values[i][i] = Rat(1);
    m.values[1][0] = t;
    m.values[0][2] = t;
    m.values[2][1] = t;
    m.world_edges = {{0, 0}, {1, 1}, {2, 2}};
    inst.kind = InstanceKind::Bipartite;
    inst.description = "tight (2-a)/(1-a) welfare-ratio market";
    inst.bipartite = m;
  } else if (id == "chain") {
    int n = param_int(params, "n", 4);
    if (n < 1) throw ParseError("param n: must be >= 1");
    BipartiteMarket m;
    m.buyers = m.sellers = n;
    m.goods = GoodsClass::General;
    m.values.assign(n, std::vector<Rat>(n, Rat(0)));
    m.values[0][0] = Rat(1);
    for (int i = 1; i < n; ++i) {
      m.values[i][i - 1] = Rat(i + 1);
      m.values[i][i] = Rat(i + 1);
    }
    inst.kind = InstanceKind::Bipartite;
    inst.description = "chain market where adding every edge is bad";
    inst.bipartite = m;
  } else if (id == "conv-tight") {
    int k = param_int(params, "k", 3);
    if (k < 1) throw ParseError("param k: must be >= 1");
    BipartiteMarket m;
    m.buyers = m.sellers = 2 * k;
    m.values.assign(2 * k, std::vector<Rat>(2 * k, Rat(0)));
    for (int i = 0; i < k; ++i)
      for (int j = 0; j < k; ++j) m.values[i][j] = Rat(1, i + 1);
    for (int i = k; i < 2 * k; ++i)
      for (int j = 0; j < 2 * k; ++j) m.values[i][j] = Rat(1);
    for (int i = 0; i < 2 * k; ++i)
      for (int j = 0; j < k; ++j) m.world_edges.insert({i, j});
    inst.kind = InstanceKind::Bipartite;
    inst.description = "welfare-to-revenue conversion tight at 1/H_k";
    inst.bipartite = m;
  } else if (id == "swsh4") {
    BipartiteMarket m = homogeneous_market(
        {Rat(10), Rat(9), Rat(3), Rat(1)}, 4);
    m.world_edges = {{0, 0}, {1, 1}, {2, 1}, {3, 2}};
    inst.kind = InstanceKind::Bipartite;
    inst.description = "four-buyer single-world-seller decomposition example";
    inst.bipartite = m;
  } else if (id == "prm2") {
    Rat eps = param_rat(params, "eps", Rat(1, 100));
    BipartiteMarket m;
    m.buyers = m.sellers = 2;
    m.values = {{Rat(1), Rat(1)}, {Rat(1), eps}};
    m.world_edges = {{1, 0}};
    inst.kind = InstanceKind::Bipartite;
    inst.description = "two-pair market with welfare ratio approaching 2";
    inst.bipartite = m;
  } else if (id == "tip-bad") {
    ThreeSidedMarket m;
    m.buyers = 2;
    m.stores = 1;
    m.couriers = 2;
    m.value = {{Rat(3)}, {Rat(10)}};
    m.cost = {{{Rat(0)}, {Rat(11)}}, {{Rat(1)}, {Rat(12)}}};
    m.structure = CostStructure::StoreSplit;
    inst.kind = InstanceKind::ThreeSided;
    inst.description = "without-tip equilibria lose welfare, tips recover it";
    inst.three_sided = m;
  } else if (id == "no-without-tip") {
    ThreeSidedMarket m;
    m.buyers = 2;
    m.stores = 2;
    m.couriers = 1;
    m.value = {{Rat(4), Rat(2)}, {Rat(1), Rat(3)}};
    m.cost = {{{Rat(0), Rat(0)}, {Rat(0), Rat(0)}}};
    inst.kind = InstanceKind::ThreeSided;
    inst.description = "single courier, no without-tip equilibrium";
    inst.three_sided = m;
  } else if (id == "market-clearing") {
    Rat kappa = param_rat(params, "kappa", Rat(3));
    if (kappa <= Rat(2)) throw ParseError("param kappa: must exceed 2");
    ThreeSidedMarket m;
    m.buyers = 2;
    m.stores = 2;
    m.couriers = 2;
    m.value = {{Rat(1), Rat(1)}, {Rat(1), Rat(1)}};
    m.cost = {{{Rat(0), kappa}, {kappa, Rat(1, 2)}},
              {{kappa, Rat(49, 100)}, {Rat(1, 2), kappa}}};
    inst.kind = InstanceKind::ThreeSided;
    inst.description = "every equilibrium clears the market at welfare 2-k";
    inst.three_sided = m;
  } else if (id == "bundle4") {
    BundlingInstance b;
    b.qualities = {0.1, 1.1, 2.1, 3.1};
    b.sigma = 1.0;
    inst.kind = InstanceKind::Bundling;
    inst.description = "four-seller bundling market, optimal window of three";
    inst.bundling = b;
  } else {
    throw ParseError("unknown generator id '" + id + "'");
  }
  return inst;
}

std::vector<std::string> generator_ids() {
  return {"no-pure", "logn",    "tight-poa",      "chain",
          "conv-tight", "swsh4", "prm2",          "tip-bad",
          "no-without-tip", "market-clearing", "bundle4"};
}

}  // namespace marketgraph
