#include "marketgraph/instance_io.hpp"

#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

namespace marketgraph {

using json = nlohmann::ordered_json;

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw ParseError(path + ": " + what);
}

Rat parse_rat(const json& v, const std::string& path) {
  try {
    if (v.is_number_integer()) return Rat(v.get<std::int64_t>());
    if (v.is_string()) return Rat::parse(v.get<std::string>());
  } catch (const std::exception& e) {
    fail(path, e.what());
  }
  fail(path, "expected a rational as \"p/q\" or an integer");
}

std::vector<std::vector<Rat>> parse_rat_matrix(const json& v,
                                               const std::string& path) {
  if (!v.is_array()) fail(path, "expected an array of rows");
  std::vector<std::vector<Rat>> out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const json& row = v[i];
    if (!row.is_array()) fail(path + "[" + std::to_string(i) + "]", "expected a row");
    std::vector<Rat> r;
    for (std::size_t j = 0; j < row.size(); ++j)
      r.push_back(parse_rat(row[j], path + "[" + std::to_string(i) + "][" +
                                        std::to_string(j) + "]"));
    out.push_back(std::move(r));
  }
  return out;
}

json rat_matrix_to_json(const std::vector<std::vector<Rat>>& m) {
  json rows = json::array();
  for (const auto& r : m) {
    json row = json::array();
    for (const auto& v : r) row.push_back(v.str());
    rows.push_back(std::move(row));
  }
  return rows;
}

BipartiteMarket parse_bipartite(const json& j, const std::string& origin) {
  BipartiteMarket m;
  if (!j.contains("values")) fail(origin + ".values", "missing");
  m.values = parse_rat_matrix(j["values"], origin + ".values");
  m.buyers = static_cast<int>(m.values.size());
  m.sellers = m.buyers == 0 ? 0 : static_cast<int>(m.values[0].size());
  if (j.contains("world_edges")) {
    const json& e = j["world_edges"];
    if (!e.is_array()) fail(origin + ".world_edges", "expected an array");
    for (std::size_t k = 0; k < e.size(); ++k) {
      const json& p = e[k];
      if (!p.is_array() || p.size() != 2)
        fail(origin + ".world_edges[" + std::to_string(k) + "]",
             "expected [buyer, seller]");
      m.world_edges.insert({p[0].get<int>(), p[1].get<int>()});
    }
  }
  if (j.contains("goods_class")) {
    try {
      m.goods = goods_class_from_string(j["goods_class"].get<std::string>());
    } catch (const std::exception& e) {
      fail(origin + ".goods_class", e.what());
    }
  }
  try {
    m.validate();
  } catch (const std::exception& e) {
    fail(origin, e.what());
  }
  return m;
}

ThreeSidedMarket parse_three_sided(const json& j, const std::string& origin) {
  ThreeSidedMarket m;
  if (!j.contains("values")) fail(origin + ".values", "missing");
  m.value = parse_rat_matrix(j["values"], origin + ".values");
  m.buyers = static_cast<int>(m.value.size());
  m.stores = m.buyers == 0 ? 0 : static_cast<int>(m.value[0].size());
  if (!j.contains("costs")) fail(origin + ".costs", "missing");
  const json& costs = j["costs"];
  if (!costs.is_array()) fail(origin + ".costs", "expected per-courier matrices");
  for (std::size_t d = 0; d < costs.size(); ++d)
    m.cost.push_back(parse_rat_matrix(costs[d], origin + ".costs[" +
                                                    std::to_string(d) + "]"));
  m.couriers = static_cast<int>(m.cost.size());
  if (j.contains("cost_structure")) {
    try {
      m.structure =
          cost_structure_from_string(j["cost_structure"].get<std::string>());
    } catch (const std::exception& e) {
      fail(origin + ".cost_structure", e.what());
    }
  }
  if (j.contains("courier_store")) {
    std::vector<int> cs;
    for (const json& v : j["courier_store"]) cs.push_back(v.get<int>());
    m.courier_store = std::move(cs);
  }
  try {
    m.validate();
  } catch (const std::exception& e) {
    fail(origin, e.what());
  }
  return m;
}

BundlingInstance parse_bundling(const json& j, const std::string& origin) {
  BundlingInstance b;
  if (!j.contains("qualities")) fail(origin + ".qualities", "missing");
  for (const json& v : j["qualities"]) {
    if (!v.is_number()) fail(origin + ".qualities", "expected numbers");
    b.qualities.push_back(v.get<double>());
  }
  if (!j.contains("sigma")) fail(origin + ".sigma", "missing");
  b.sigma = j["sigma"].get<double>();
  if (j.contains("prior")) {
    UniformPrior p;
    p.lo = j["prior"]["lo"].get<double>();
    p.hi = j["prior"]["hi"].get<double>();
    b.prior = p;
  }
  if (j.contains("capacity")) b.capacity = j["capacity"].get<int>();
  if (j.contains("quality_mix")) {
    QualityMix q;
    q.n_low = j["quality_mix"]["n_low"].get<int>();
    q.mu_low = j["quality_mix"]["mu_low"].get<double>();
    q.mu_high = j["quality_mix"]["mu_high"].get<double>();
    b.quality_mix = q;
  }
  return b;
}

std::string kind_name(InstanceKind k) {
  switch (k) {
    case InstanceKind::Bipartite: return "bipartite";
    case InstanceKind::ThreeSided: return "three_sided";
    case InstanceKind::Bundling: return "bundling";
  }
  return "bipartite";
}

}  // namespace

Instance load_instance(std::istream& in, const std::string& origin) {
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ParseError(origin + ": " + e.what());
  }
  Instance inst;
  if (!j.contains("kind")) fail(origin + ".kind", "missing");
  std::string kind = j["kind"].get<std::string>();
  inst.name = j.value("name", "");
  inst.description = j.value("description", "");
  if (kind == "bipartite") {
    inst.kind = InstanceKind::Bipartite;
    inst.bipartite = parse_bipartite(j, origin);
  } else if (kind == "three_sided") {
    inst.kind = InstanceKind::ThreeSided;
    inst.three_sided = parse_three_sided(j, origin);
    if (j.contains("store_costs")) {
      std::vector<Rat> sc;
      const json& arr = j["store_costs"];
      for (std::size_t s = 0; s < arr.size(); ++s)
        sc.push_back(parse_rat(arr[s], origin + ".store_costs[" +
                                           std::to_string(s) + "]"));
      if (static_cast<int>(sc.size()) != inst.three_sided->stores)
        fail(origin + ".store_costs", "length must equal store count");
      inst.store_costs = std::move(sc);
    }
  } else if (kind == "bundling") {
    inst.kind = InstanceKind::Bundling;
    inst.bundling = parse_bundling(j, origin);
  } else {
    fail(origin + ".kind", "unknown kind '" + kind + "'");
  }
  return inst;
}

Instance load_instance_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path + ": cannot open");
  return load_instance(in, path);
}

std::string save_instance(const Instance& inst) {
  json j;
  j["kind"] = kind_name(inst.kind);
  if (!inst.name.empty()) j["name"] = inst.name;
  if (!inst.description.empty()) j["description"] = inst.description;
  if (inst.kind == InstanceKind::Bipartite) {
    const BipartiteMarket& m = *inst.bipartite;
    j["goods_class"] = to_string(m.goods);
    j["values"] = rat_matrix_to_json(m.values);
    json edges = json::array();
    for (auto [a, b] : m.world_edges) edges.push_back(json::array({a, b}));
    j["world_edges"] = std::move(edges);
  } else if (inst.kind == InstanceKind::ThreeSided) {
    const ThreeSidedMarket& m = *inst.three_sided;
    j["cost_structure"] = to_string(m.structure);
    j["values"] = rat_matrix_to_json(m.value);
    json costs = json::array();
    for (const auto& per : m.cost) costs.push_back(rat_matrix_to_json(per));
    j["costs"] = std::move(costs);
    if (m.courier_store) j["courier_store"] = *m.courier_store;
    if (inst.store_costs) {
      json sc = json::array();
      for (const auto& c : *inst.store_costs) sc.push_back(c.str());
      j["store_costs"] = std::move(sc);
    }
  } else {
    const BundlingInstance& b = *inst.bundling;
    j["qualities"] = b.qualities;
    j["sigma"] = b.sigma;
    if (b.prior) j["prior"] = {{"lo", b.prior->lo}, {"hi", b.prior->hi}};
    if (b.capacity) j["capacity"] = *b.capacity;
    if (b.quality_mix)
      j["quality_mix"] = {{"n_low", b.quality_mix->n_low},
                          {"mu_low", b.quality_mix->mu_low},
                          {"mu_high", b.quality_mix->mu_high}};
  }
  return j.dump(2) + "\n";
}

void save_instance_file(const Instance& inst, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ParseError(path + ": cannot open for writing");
  out << save_instance(inst);
}

Instance normalize_store_costs(const Instance& inst) {
  if (inst.kind != InstanceKind::ThreeSided || !inst.store_costs)
    throw ParseError("normalize: instance has no store_costs to fold");
  Instance out = inst;
  ThreeSidedMarket& m = *out.three_sided;
  for (int b = 0; b < m.buyers; ++b)
    for (int s = 0; s < m.stores; ++s) {
      Rat adjusted = m.value[b][s] - (*inst.store_costs)[s];
      m.value[b][s] = Rat::max(adjusted, Rat(0));
    }
  out.store_costs.reset();
  return out;
}

}  // namespace marketgraph
