#include "marketgraph/flow.hpp"

#include <optional>
#include <stdexcept>

namespace marketgraph {

int MinCostFlow::add_edge(int from, int to, int capacity, Rat cost) {
  if (from < 0 || to < 0 || from >= static_cast<int>(head_.size()) ||
      to >= static_cast<int>(head_.size()))
    throw std::invalid_argument("flow edge endpoint out of range");
  if (capacity < 0) throw std::invalid_argument("negative capacity");
  int id = static_cast<int>(arcs_.size()) / 2;
  arcs_.push_back({to, head_[from], capacity, 0, cost});
  head_[from] = static_cast<int>(arcs_.size()) - 1;
  arcs_.push_back({from, head_[to], 0, 0, -cost});
  head_[to] = static_cast<int>(arcs_.size()) - 1;
  return id;
}

bool MinCostFlow::augment_unit(int source, int sink, Rat* path_cost) {
  const int n = static_cast<int>(head_.size());
  std::vector<std::optional<Rat>> dist(n);
  std::vector<int> via(n, -1);
  dist[source] = Rat(0);
  bool changed = true;
  int rounds = 0;
  while (changed) {
    if (++rounds > n + 1)
      throw std::logic_error("negative cycle in flow network");
    changed = false;
    for (int u = 0; u < n; ++u) {
      if (!dist[u]) continue;
      for (int a = head_[u]; a != -1; a = arcs_[a].next) {
        if (arcs_[a].cap - arcs_[a].flow <= 0) continue;
        Rat cand = *dist[u] + arcs_[a].cost;
        int v = arcs_[a].to;
        if (!dist[v] || cand < *dist[v]) {
          dist[v] = cand;
          via[v] = a;
          changed = true;
        }
      }
    }
  }
  if (!dist[sink]) return false;
  for (int v = sink; v != source;) {
    int a = via[v];
    arcs_[a].flow += 1;
    arcs_[a ^ 1].flow -= 1;
    v = arcs_[a ^ 1].to;
  }
  *path_cost = *dist[sink];
  return true;
}

MinCostFlow::Result MinCostFlow::solve(int source, int sink, int required) {
  Result res;
  while (res.flow < required) {
    Rat step;
    if (!augment_unit(source, sink, &step)) break;
    res.cost += step;
    res.flow += 1;
  }
  res.feasible = res.flow == required;
  return res;
}

MinCostFlow::Result MinCostFlow::solve_best_prefix(int source, int sink,
                                                   int max_units) {
  Result best;
  best.feasible = true;
  Rat running(0);
  int units = 0;
  std::vector<Arc> best_arcs = arcs_;
  while (units < max_units) {
    Rat step;
    if (!augment_unit(source, sink, &step)) break;
    running += step;
    ++units;
    if (running < best.cost) {
      best.cost = running;
      best.flow = units;
      best_arcs = arcs_;
    }
  }
  arcs_ = best_arcs;
  return best;
}

}  // namespace marketgraph
