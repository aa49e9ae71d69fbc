#pragma once

#include <vector>

#include "marketgraph/rational.hpp"

namespace marketgraph {

/// Minimum-cost flow with integral capacities and exact rational costs,
/// successive shortest paths with Bellman-Ford (costs may be negative, no
/// negative cycles).  Integral optima are relied upon throughout.
class MinCostFlow {
 public:
  explicit MinCostFlow(int nodes) : head_(nodes, -1) {}

  /// Returns an edge id usable with flow_on(); the reverse arc is implicit.
  int add_edge(int from, int to, int capacity, Rat cost);

  struct Result {
    int flow = 0;
    Rat cost;
    bool feasible = false;  // reached the requested flow value
  };

  /// Pushes exactly `required` units (or as many as possible if fewer exist;
  /// feasible reports whether the target was met).
  Result solve(int source, int sink, int required);

  /// Augments unit by unit up to max_units and keeps the prefix with the
  /// minimum total cost (ties: fewer units).  The kept prefix's flow is what
  /// flow_on() then reports.
  Result solve_best_prefix(int source, int sink, int max_units);

  int flow_on(int edge_id) const { return arcs_[edge_id * 2].flow; }

 private:
  struct Arc {
    int to;
    int next;
    int cap;
    int flow = 0;
    Rat cost;
  };
  bool augment_unit(int source, int sink, Rat* path_cost);

  std::vector<Arc> arcs_;
  std::vector<int> head_;
};

}  // namespace marketgraph
