#include "marketgraph/suite.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "marketgraph/delivery.hpp"
#include "marketgraph/disrupt.hpp"
#include "marketgraph/fees.hpp"
#include "marketgraph/oracles.hpp"

namespace marketgraph {

using json = nlohmann::ordered_json;

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

namespace {

using KV = std::map<std::string, std::string>;

Rat arg_rat(const KV& args, const std::string& key) {
  auto it = args.find(key);
  if (it == args.end()) throw ParseError("missing arg '" + key + "'");
  return Rat::parse(it->second);
}

int arg_int(const KV& args, const std::string& key, int fallback) {
  auto it = args.find(key);
  if (it == args.end()) return fallback;
  return std::stoi(it->second);
}

double arg_double(const KV& args, const std::string& key) {
  auto it = args.find(key);
  if (it == args.end()) throw ParseError("missing arg '" + key + "'");
  return std::stod(it->second);
}

std::vector<int> arg_int_list(const KV& args, const std::string& key) {
  std::vector<int> out;
  auto it = args.find(key);
  if (it == args.end()) return out;
  std::stringstream ss(it->second);
  std::string tok;
  while (std::getline(ss, tok, ','))
    if (!tok.empty()) out.push_back(std::stoi(tok));
  return out;
}

EdgeSet arg_edges(const KV& args, const std::string& key) {
  auto it = args.find(key);
  EdgeSet edges;
  if (it == args.end()) return edges;
  json j = json::parse(it->second);
  const json& arr = j.is_object() ? j.at("edges") : j;
  for (const json& e : arr) edges.insert({e[0].get<int>(), e[1].get<int>()});
  return edges;
}

const BipartiteMarket& need_bipartite(const Instance& inst) {
  if (!inst.bipartite) throw ParseError("op needs a bipartite instance");
  return *inst.bipartite;
}

const ThreeSidedMarket& need_three_sided(const Instance& inst) {
  if (!inst.three_sided) throw ParseError("op needs a three_sided instance");
  return *inst.three_sided;
}

const BundlingInstance& need_bundling(const Instance& inst) {
  if (!inst.bundling) throw ParseError("op needs a bundling instance");
  return *inst.bundling;
}

std::string join_ints(const std::vector<int>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(v[i]);
  }
  return s;
}

std::string edges_str(const EdgeSet& e) {
  std::string s;
  for (auto [i, j] : e) {
    if (!s.empty()) s += " ";
    s += "(" + std::to_string(i) + "," + std::to_string(j) + ")";
  }
  return s;
}

}  // namespace

std::map<std::string, std::string> run_op(const std::string& op,
                                          const Instance& inst,
                                          const KV& args) {
  KV out;
  if (op == "matching.max") {
    const auto& m = need_bipartite(inst);
    EdgeSet edges = args.count("edges") ? arg_edges(args, "edges")
                                        : m.complete_edges();
    auto [match, weight] = max_weight_matching(m, edges);
    out["weight"] = weight.str();
    out["pairs"] = edges_str(EdgeSet(match.pairs.begin(), match.pairs.end()));
  } else if (op == "prices.max" || op == "prices.min") {
    const auto& m = need_bipartite(inst);
    EdgeSet edges = args.count("edges") ? arg_edges(args, "edges")
                                        : m.world_edges;
    PriceVector p = op == "prices.max" ? max_walrasian_prices(m, edges)
                                       : min_walrasian_prices(m, edges);
    for (std::size_t j = 0; j < p.p.size(); ++j)
      out["p" + std::to_string(j)] = p.p[j].str();
  } else if (op == "fees.eq") {
    const auto& m = need_bipartite(inst);
    Rat alpha = arg_rat(args, "alpha");
    std::vector<int> p = find_pure_equilibrium(m, alpha);
    out["P"] = join_ints(p);
    out["violations"] =
        std::to_string(verify_platform_equilibrium(m, alpha, p).size());
  } else if (op == "fees.verify") {
    const auto& m = need_bipartite(inst);
    Rat alpha = arg_rat(args, "alpha");
    std::vector<int> p = arg_int_list(args, "join");
    out["violations"] =
        std::to_string(verify_platform_equilibrium(m, alpha, p).size());
  } else if (op == "fees.sweep") {
    const auto& m = need_bipartite(inst);
    auto steps = sweep_alpha(m);
    out["steps"] = std::to_string(steps.size());
    for (std::size_t k = 0; k < steps.size(); ++k) {
      out["alpha" + std::to_string(k)] = steps[k].alpha.str();
      out["P" + std::to_string(k)] = join_ints(steps[k].P);
    }
  } else if (op == "fees.audit") {
    const auto& m = need_bipartite(inst);
    auto res = best_response_audit(m, arg_rat(args, "alpha"),
                                   arg_int(args, "max_iters", 64));
    out["converged"] = res.converged ? "true" : "false";
    out["profiles"] = std::to_string(res.profiles.size());
    out["cycle"] = std::to_string(res.cycle.size());
    if (res.converged) out["P"] = join_ints(res.fixed_point);
  } else if (op == "fees.poa") {
    const auto& m = need_bipartite(inst);
    Rat alpha = arg_rat(args, "alpha");
    std::vector<int> p = args.count("join") ? arg_int_list(args, "join")
                                            : find_pure_equilibrium(m, alpha);
    RevenuePoa r = platform_revenue_and_poa(m, alpha, p);
    out["P"] = join_ints(p);
    out["revenue"] = r.revenue.str();
    out["welfare"] = r.welfare.str();
    out["optimal_welfare"] = r.optimal_welfare.str();
    out["poa"] = r.poa ? r.poa->str() : "inf";
  } else if (op == "disrupt.eval") {
    const auto& m = need_bipartite(inst);
    PlatformRevenueResult r = platform_revenue(m, arg_edges(args, "edges"));
    out["revenue"] = r.revenue.str();
    out["welfare"] = r.welfare.str();
    out["transacting"] = edges_str(EdgeSet(r.transacting_platform_edges.begin(),
                                           r.transacting_platform_edges.end()));
  } else if (op == "disrupt.greedy") {
    const auto& m = need_bipartite(inst);
    GreedyConversion g = greedy_welfare_to_revenue(m, arg_edges(args, "edges"));
    out["revenue"] = g.revenue.str();
    out["delta_welfare"] = g.delta_welfare.str();
    out["kept"] = edges_str(g.kept);
  } else if (op == "disrupt.swsh" || op == "disrupt.shgb") {
    const auto& m = need_bipartite(inst);
    EdgeSetRevenue r = op == "disrupt.swsh" ? swsh_optimal(m) : shgb_optimal(m);
    out["revenue"] = r.revenue.str();
    out["edges"] = edges_str(r.edges);
  } else if (op == "disrupt.extract") {
    const auto& m = need_bipartite(inst);
    EdgeSetRevenue r = homogeneous_extract(m);
    out["revenue"] = r.revenue.str();
    out["edges"] = edges_str(r.edges);
  } else if (op == "disrupt.pair") {
    const auto& m = need_bipartite(inst);
    EdgeSetRevenue r = single_pair_max_revenue(m, arg_int(args, "buyer", -1),
                                               arg_int(args, "seller", -1));
    out["price"] = r.revenue.str();
    out["edges"] = edges_str(r.edges);
  } else if (op == "oracle.platform_eq_enum") {
    const auto& m = need_bipartite(inst);
    PlatformEqEnum e = platform_eq_enum(m, arg_rat(args, "alpha"));
    out["count"] = std::to_string(e.equilibria.size());
    out["examined"] = std::to_string(e.examined);
  } else if (op == "oracle.edges_subsets" || op == "oracle.edges_transact") {
    const auto& m = need_bipartite(inst);
    EdgesEnum e = op == "oracle.edges_subsets"
                      ? enum_platform_edges_subsets(
                            m, arg_int(args, "max_pairs", 20))
                      : enum_platform_edges_transact(
                            m, arg_int(args, "max_side", 9));
    out["best_revenue"] = e.best_revenue.str();
    out["argmax_count"] = std::to_string(e.argmax.size());
    out["examined"] = std::to_string(e.examined);
  } else if (op == "delivery.opt") {
    const auto& m = need_three_sided(inst);
    auto [alloc, welfare] = m.structure == CostStructure::SingleMinded
                                ? optimal_welfare_single_minded(m)
                                : optimal_welfare_structured(m);
    out["welfare"] = welfare.str();
    out["trades"] = std::to_string(alloc.triples.size());
  } else if (op == "delivery.efficient") {
    const auto& m = need_three_sided(inst);
    SupportedEquilibrium eq = efficient_with_tip_equilibrium(m);
    out["welfare"] = eq.welfare.str();
  } else if (op == "delivery.profit") {
    const auto& m = need_three_sided(inst);
    ProfitResult r = without_tip_profit_max(m);
    out["profit"] = r.profit.str();
    out["epsilon"] = r.epsilon.str();
    for (std::size_t s = 0; s < r.p.size(); ++s)
      out["p" + std::to_string(s)] = r.p[s].str();
  } else if (op == "delivery.brute") {
    const auto& m = need_three_sided(inst);
    auto it = args.find("mode");
    if (it == args.end()) throw ParseError("missing arg 'mode'");
    BruteMode3 mode;
    if (it->second == "opt_welfare") mode = BruteMode3::OptWelfare;
    else if (it->second == "best_with_tip") mode = BruteMode3::BestWithTip;
    else if (it->second == "best_without_tip") mode = BruteMode3::BestWithoutTip;
    else if (it->second == "max_profit") mode = BruteMode3::MaxProfit;
    else throw ParseError("unknown brute mode '" + it->second + "'");
    BruteForce3Report rep = brute_force_3sided(m, mode);
    out["value"] = rep.value ? rep.value->str() : "none";
    out["examined"] = std::to_string(rep.examined);
  } else if (op == "bundle.rev") {
    MonopolyRev r = monopoly_rev(arg_double(args, "mu"), arg_double(args, "sigma"));
    out["rev"] = format_double(r.rev);
    out["p_star"] = format_double(r.p_star);
  } else if (op == "bundle.optimal") {
    const auto& b = need_bundling(inst);
    BundleWindow w = complete_info_optimal_bundle(b.qualities, b.sigma);
    out["profit"] = format_double(w.profit);
    out["lo"] = std::to_string(w.lo);
    out["hi"] = std::to_string(w.hi);
    std::string q;
    for (int i = w.lo; i <= w.hi; ++i) {
      if (!q.empty()) q += ",";
      q += format_double(w.sorted_qualities[i]);
    }
    out["window"] = q;
  } else if (op == "bundle.mechanism") {
    UniformPrior prior{arg_double(args, "lo"), arg_double(args, "hi")};
    SurrogateResult r = surrogate_threshold_mechanism(
        prior, arg_double(args, "sigma"), arg_int(args, "n", 1),
        arg_int(args, "grid", 4096));
    out["threshold"] = r.mechanism.include_none
                           ? "none"
                           : format_double(r.mechanism.threshold);
    out["payment"] = format_double(r.mechanism.payment);
    out["surrogate_profit"] = format_double(r.surrogate_profit);
  } else if (op == "bundle.inhouse") {
    InHouseResult r = two_quality_inhouse(
        arg_int(args, "n", 0), arg_int(args, "nl", 0), arg_double(args, "mul"),
        arg_double(args, "muh"), arg_double(args, "sigma"),
        arg_int(args, "cap", 0));
    out["price"] = to_string(r.best.posted_price);
    out["produce"] = std::to_string(r.best.produce_count);
    out["quality"] = to_string(r.best.produce_quality);
    out["profit"] = format_double(r.best.profit);
    out["tau_switch_low"] = format_double(r.tau_switch_low);
    out["tau_switch_none"] = format_double(r.tau_switch_none);
  } else if (op == "oracle.bundle_enum") {
    const auto& b = need_bundling(inst);
    BundleEnum e = bundle_enum(b.qualities, b.sigma, arg_int(args, "max_n", 12));
    out["profit"] = format_double(e.profit);
    out["subset"] = join_ints(e.best_subset);
    out["contiguous"] = e.contiguous_value ? "true" : "false";
  } else {
    throw ParseError("unknown op '" + op + "'");
  }
  return out;
}

SuiteResult run_suite(const std::string& config_path) {
  std::ifstream in(config_path);
  if (!in) throw ParseError(config_path + ": cannot open");
  json cfg;
  try {
    cfg = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ParseError(config_path + ": " + e.what());
  }
  SuiteResult res;
  if (!cfg.contains("cases")) return res;
  for (const json& c : cfg["cases"]) {
    std::string name = c.value("name", "case");
    Instance inst;
    if (c.contains("generate")) {
      std::map<std::string, std::string> params;
      if (c["generate"].contains("params"))
        for (auto& [k, v] : c["generate"]["params"].items())
          params[k] = v.is_string() ? v.get<std::string>() : v.dump();
      inst = generate(c["generate"]["id"].get<std::string>(), params);
    } else if (c.contains("instance_path")) {
      inst = load_instance_file(c["instance_path"].get<std::string>());
    } else if (c.contains("instance")) {
      std::stringstream ss(c["instance"].dump());
      inst = load_instance(ss, name);
    }
    std::map<std::string, std::string> args;
    if (c.contains("args"))
      for (auto& [k, v] : c["args"].items())
        args[k] = v.is_string() ? v.get<std::string>() : v.dump();
    KV actual = run_op(c.at("op").get<std::string>(), inst, args);
    for (const json& e : c.value("expect", json::array())) {
      SuiteRow row;
      row.name = name;
      row.key = e.at("key").get<std::string>();
      const json& want = e.at("value");
      row.expected = want.is_string() ? want.get<std::string>() : want.dump();
      auto it = actual.find(row.key);
      row.actual = it == actual.end() ? "<missing>" : it->second;
      if (it == actual.end()) {
        row.pass = false;
      } else if (e.contains("tol")) {
        double a = std::stod(row.actual), b = std::stod(row.expected);
        row.pass = std::abs(a - b) <= e["tol"].get<double>();
      } else {
        row.pass = row.actual == row.expected;
      }
      res.all_pass = res.all_pass && row.pass;
      res.rows.push_back(row);
    }
  }
  return res;
}

}  // namespace marketgraph
