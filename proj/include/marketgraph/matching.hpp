#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "marketgraph/rational.hpp"

namespace marketgraph {

/// Two-component weight ordered lexicographically.  The matching engine is
/// written against this type so callers can optimize a primary objective and
/// break ties on a secondary one in a single exact pass.
struct WeightPair {
  Rat primary;
  Rat secondary;

  WeightPair() = default;
  WeightPair(Rat p) : primary(std::move(p)) {}  // NOLINT
  WeightPair(Rat p, Rat s) : primary(std::move(p)), secondary(std::move(s)) {}

  WeightPair operator-() const { return {-primary, -secondary}; }
  WeightPair& operator+=(const WeightPair& o) {
    primary += o.primary;
    secondary += o.secondary;
    return *this;
  }
  WeightPair& operator-=(const WeightPair& o) {
    primary -= o.primary;
    secondary -= o.secondary;
    return *this;
  }
  friend WeightPair operator+(WeightPair a, const WeightPair& b) {
    return a += b;
  }
  friend WeightPair operator-(WeightPair a, const WeightPair& b) {
    return a -= b;
  }
  friend bool operator==(const WeightPair&, const WeightPair&) = default;
  friend std::strong_ordering operator<=>(const WeightPair& a,
                                          const WeightPair& b) {
    auto c = a.primary <=> b.primary;
    return c != 0 ? c : a.secondary <=> b.secondary;
  }
};

/// Dense bipartite instance; absent entries are non-edges.
struct WeightedBipartite {
  int buyers = 0;
  int sellers = 0;
  std::vector<std::vector<std::optional<WeightPair>>> weight;

  WeightedBipartite() = default;
  WeightedBipartite(int n, int m)
      : buyers(n), sellers(m), weight(n, std::vector<std::optional<WeightPair>>(m)) {}
};

using PairList = std::vector<std::pair<int, int>>;

/// Value of a maximum-weight (not necessarily perfect) matching.
WeightPair max_weight_value(const WeightedBipartite& g);

/// Among all maximum-weight matchings, the one whose sorted pair sequence is
/// lexicographically smallest (sequences compare element-wise, a strict
/// prefix sorts first).
PairList lex_min_max_weight_matching(const WeightedBipartite& g,
                                     WeightPair* value_out = nullptr);

/// Value of the best matching forced to contain `forced` (its endpoints are
/// removed and the forced weight added).  Returns nullopt if a forced pair is
/// not an edge or pairs collide.
std::optional<WeightPair> max_weight_value_with_forced(
    const WeightedBipartite& g, const PairList& forced);

/// Size of a maximum-cardinality matching (unit weights).
int max_cardinality(const std::vector<std::vector<bool>>& adj);

}  // namespace marketgraph
