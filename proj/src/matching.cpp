#include "marketgraph/matching.hpp"

#include <algorithm>
#include <functional>
#include <stdexcept>

namespace marketgraph {

namespace {

// Successive shortest augmenting paths on the residual graph.  Costs are
// negated weights; we augment while the best path strictly increases total
// weight.  Exact arithmetic keeps this correct without potentials.
struct Augmenter {
  const WeightedBipartite& g;
  std::vector<int> seller_of;  // per buyer, -1 if unmatched
  std::vector<int> buyer_of;   // per seller, -1 if unmatched
  WeightPair total;

  explicit Augmenter(const WeightedBipartite& graph)
      : g(graph), seller_of(graph.buyers, -1), buyer_of(graph.sellers, -1) {}

  // Bellman-Ford over the implicit residual graph.  dist is in "cost" space
  // (cost = -weight).  Returns true if some augmenting path has negative cost.
  bool augment_once() {
    const int n = g.buyers, m = g.sellers;
    std::vector<std::optional<WeightPair>> dist_b(n), dist_s(m);
    std::vector<int> pred_s(m, -2);  // buyer that reaches seller j
    for (int i = 0; i < n; ++i)
      if (seller_of[i] == -1) dist_b[i] = WeightPair{};

    bool changed = true;
    int rounds = 0;
    while (changed && rounds++ <= n + m + 1) {
      changed = false;
      for (int i = 0; i < n; ++i) {
        if (!dist_b[i]) continue;
        for (int j = 0; j < m; ++j) {
          if (!g.weight[i][j] || seller_of[i] == j) continue;
          WeightPair cand = *dist_b[i] - *g.weight[i][j];
          if (!dist_s[j] || cand < *dist_s[j]) {
            dist_s[j] = cand;
            pred_s[j] = i;
            changed = true;
          }
        }
      }
      for (int j = 0; j < m; ++j) {
        if (!dist_s[j] || buyer_of[j] == -1) continue;
        int i = buyer_of[j];
        WeightPair cand = *dist_s[j] + *g.weight[i][j];
        if (!dist_b[i] || cand < *dist_b[i]) {
          dist_b[i] = cand;
          changed = true;
        }
      }
    }
    if (changed) throw std::logic_error("negative cycle in matching residual");

    int best = -1;
    for (int j = 0; j < m; ++j) {
      if (!dist_s[j] || buyer_of[j] != -1) continue;
      if (!(*dist_s[j] < WeightPair{})) continue;  // no strict weight gain
      if (best == -1 || *dist_s[j] < *dist_s[best]) best = j;
    }
    if (best == -1) return false;

    total -= *dist_s[best];
    int j = best;
    while (true) {
      int i = pred_s[j];
      int next = seller_of[i];
      seller_of[i] = j;
      buyer_of[j] = i;
      if (next == -1) break;
      j = next;
    }
    return true;
  }

  void run() {
    while (augment_once()) {
    }
  }
};

WeightedBipartite erase_pairs(const WeightedBipartite& g, const PairList& used) {
  WeightedBipartite h = g;
  for (auto [i, j] : used) {
    for (int jj = 0; jj < h.sellers; ++jj) h.weight[i][jj].reset();
    for (int ii = 0; ii < h.buyers; ++ii) h.weight[ii][j].reset();
  }
  return h;
}

}  // namespace

WeightPair max_weight_value(const WeightedBipartite& g) {
  Augmenter a(g);
  a.run();
  return a.total;
}

std::optional<WeightPair> max_weight_value_with_forced(
    const WeightedBipartite& g, const PairList& forced) {
  WeightPair base{};
  std::vector<bool> bused(g.buyers, false), sused(g.sellers, false);
  for (auto [i, j] : forced) {
    if (i < 0 || i >= g.buyers || j < 0 || j >= g.sellers) return std::nullopt;
    if (bused[i] || sused[j] || !g.weight[i][j]) return std::nullopt;
    bused[i] = sused[j] = true;
    base += *g.weight[i][j];
  }
  return base + max_weight_value(erase_pairs(g, forced));
}

PairList lex_min_max_weight_matching(const WeightedBipartite& g,
                                     WeightPair* value_out) {
  const WeightPair target = max_weight_value(g);
  PairList chosen;
  WeightPair acc{};
  std::pair<int, int> floor{-1, -1};
  while (acc != target) {
    bool advanced = false;
    for (int i = 0; i < g.buyers && !advanced; ++i) {
      for (int j = 0; j < g.sellers && !advanced; ++j) {
        if (std::pair{i, j} <= floor || !g.weight[i][j]) continue;
        bool clash = false;
        for (auto [bi, bj] : chosen)
          if (bi == i || bj == j) clash = true;
        if (clash) continue;
        PairList candidate = chosen;
        candidate.emplace_back(i, j);
        auto v = max_weight_value_with_forced(g, candidate);
        if (v && *v == target) {
          chosen = std::move(candidate);
          acc += *g.weight[i][j];
          floor = {i, j};
          advanced = true;
        }
      }
    }
    if (!advanced)
      throw std::logic_error("lex matching failed to extend prefix");
  }
  if (value_out) *value_out = target;
  return chosen;
}

int max_cardinality(const std::vector<std::vector<bool>>& adj) {
  const int n = static_cast<int>(adj.size());
  const int m = n == 0 ? 0 : static_cast<int>(adj[0].size());
  std::vector<int> buyer_of(m, -1);
  std::vector<bool> seen(m);
  // Kuhn's algorithm; fine at the sizes this library targets.
  std::function<bool(int)> try_buyer = [&](int i) -> bool {
    for (int j = 0; j < m; ++j) {
      if (!adj[i][j] || seen[j]) continue;
      seen[j] = true;
      if (buyer_of[j] == -1 || try_buyer(buyer_of[j])) {
        buyer_of[j] = i;
        return true;
      }
    }
    return false;
  };
  int size = 0;
  for (int i = 0; i < n; ++i) {
    seen.assign(m, false);
    if (try_buyer(i)) ++size;
  }
  return size;
}

}  // namespace marketgraph
