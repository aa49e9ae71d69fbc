#include "doctest.h"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "marketgraph/instance_io.hpp"
#include "marketgraph/suite.hpp"

namespace mg = marketgraph;
using mg::Rat;

TEST_CASE("generated instances round trip byte for byte") {
  for (const std::string& id : mg::generator_ids()) {
    mg::Instance a = mg::generate(id, {});
    mg::Instance b = mg::generate(id, {});
    std::string text = mg::save_instance(a);
    CHECK(text == mg::save_instance(b));  // generators are pure

    std::stringstream ss(text);
    mg::Instance back = mg::load_instance(ss, id);
    CHECK(mg::save_instance(back) == text);
  }
  CHECK_THROWS_AS(mg::generate("no-such-figure", {}), mg::ParseError);
}

TEST_CASE("rationals survive the text format exactly") {
  std::stringstream ss(R"({
    "kind": "bipartite",
    "values": [["1/3", "2"], ["61/20", 0]],
    "world_edges": [[0, 0]]
  })");
  mg::Instance inst = mg::load_instance(ss, "inline");
  CHECK(inst.bipartite->values[0][0] == Rat(1, 3));
  CHECK(inst.bipartite->values[1][0] == Rat(61, 20));
  CHECK(inst.bipartite->values[0][1] == Rat(2));
}

TEST_CASE("malformed inputs fail with a field position") {
  auto parse = [](const std::string& text) {
    std::stringstream ss(text);
    return mg::load_instance(ss, "test");
  };
  CHECK_THROWS_WITH_AS(parse(R"({"kind": "nonsense"})"),
                       doctest::Contains("test.kind"), mg::ParseError);
  CHECK_THROWS_WITH_AS(
      parse(R"({"kind": "bipartite", "values": [["1.5"]]})"),
      doctest::Contains("values[0][0]"), mg::ParseError);
  CHECK_THROWS_WITH_AS(parse(R"({"kind": "bipartite"})"),
                       doctest::Contains("test.values"), mg::ParseError);
  CHECK_THROWS_AS(parse("not json at all"), mg::ParseError);
}

TEST_CASE("worked-figure generators carry their published numbers") {
  mg::Instance logn = mg::generate("logn", {{"n", "3"}, {"eps", "1/100"}});
  CHECK(logn.bipartite->values[0][0] == Rat(3) + Rat(1, 100));
  CHECK(logn.bipartite->values[1][0] == Rat(3, 2));
  CHECK(logn.bipartite->values[2][2] == Rat(1));
  CHECK(logn.bipartite->world_edges.empty());

  mg::Instance tip = mg::generate("tip-bad", {});
  CHECK(tip.three_sided->value[0][0] == Rat(3));
  CHECK(tip.three_sided->value[1][0] == Rat(10));
  CHECK(tip.three_sided->cost[0][0][0] == Rat(0));
  CHECK(tip.three_sided->cost[0][1][0] == Rat(11));
  CHECK(tip.three_sided->cost[1][0][0] == Rat(1));
  CHECK(tip.three_sided->cost[1][1][0] == Rat(12));

  mg::Instance chain = mg::generate("chain", {{"n", "2"}});
  CHECK(chain.bipartite->values[0][0] == Rat(1));
  CHECK(chain.bipartite->values[1][0] == Rat(2));
  CHECK(chain.bipartite->values[1][1] == Rat(2));
}

TEST_CASE("store-cost normalization folds costs into values") {
  mg::Instance inst = mg::generate("tip-bad", {});
  inst.store_costs = std::vector<Rat>{Rat(1)};
  mg::Instance out = mg::normalize_store_costs(inst);
  CHECK(out.three_sided->value[0][0] == Rat(2));
  CHECK(out.three_sided->value[1][0] == Rat(9));
  CHECK(!out.store_costs.has_value());
  CHECK_THROWS_AS(mg::normalize_store_costs(out), mg::ParseError);
}

TEST_CASE("suite runner reports per-key pass and fail rows") {
  std::string config = R"({
    "cases": [
      {
        "name": "chain-eval",
        "generate": {"id": "chain", "params": {"n": "5"}},
        "op": "disrupt.eval",
        "args": {"edges": "[[0,0],[1,1],[2,2],[3,3],[4,4]]"},
        "expect": [
          {"key": "revenue", "value": "15"},
          {"key": "welfare", "value": "15"}
        ]
      },
      {
        "name": "bundle-rev",
        "op": "bundle.rev",
        "instance": {"kind": "bundling", "qualities": [], "sigma": 0},
        "args": {"mu": "1.0", "sigma": "4.41"},
        "expect": [
          {"key": "rev", "value": "1.0", "tol": 0.01},
          {"key": "rev", "value": "2.0", "tol": 0.01}
        ]
      }
    ]
  })";
  char path[] = "/tmp/mg_suite_XXXXXX";
  int fd = mkstemp(path);
  REQUIRE(fd != -1);
  {
    std::ofstream out(path);
    out << config;
  }
  mg::SuiteResult res = mg::run_suite(path);
  std::remove(path);
  REQUIRE(res.rows.size() == 4);
  CHECK(res.rows[0].pass);
  CHECK(res.rows[1].pass);
  CHECK(res.rows[2].pass);
  CHECK(!res.rows[3].pass);  // the perturbed expectation fails
  CHECK(!res.all_pass);
}

TEST_CASE("run_op rejects unknown operations") {
  mg::Instance inst = mg::generate("chain", {});
  CHECK_THROWS_AS(mg::run_op("no.such.op", inst, {}), mg::ParseError);
}
