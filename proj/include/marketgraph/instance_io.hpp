#pragma once

#include <iosfwd>
#include <map>
#include <optional>
#include <string>

#include "marketgraph/bundle.hpp"
#include "marketgraph/delivery.hpp"
#include "marketgraph/market.hpp"

namespace marketgraph {

enum class InstanceKind { Bipartite, ThreeSided, Bundling };

struct QualityMix {
  int n_low = 0;
  double mu_low = 0.0;
  double mu_high = 0.0;
};

struct BundlingInstance {
  std::vector<double> qualities;
  double sigma = 0.0;
  std::optional<UniformPrior> prior;
  std::optional<int> capacity;
  std::optional<QualityMix> quality_mix;
};

/// One parsed instance file.  Rationals serialize as "p/q" strings; bundling
/// payloads use decimal floats.
struct Instance {
  InstanceKind kind = InstanceKind::Bipartite;
  std::string name;
  std::string description;
  std::optional<BipartiteMarket> bipartite;
  std::optional<ThreeSidedMarket> three_sided;
  std::optional<std::vector<Rat>> store_costs;  // pre-normalization input
  std::optional<BundlingInstance> bundling;
};

/// Parse errors carry a "field path: problem" message.
struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

Instance load_instance(std::istream& in, const std::string& origin = "<stream>");
Instance load_instance_file(const std::string& path);
std::string save_instance(const Instance& inst);
void save_instance_file(const Instance& inst, const std::string& path);

/// Folds declared store costs into buyer values (v' = v - c, clamped at the
/// point of violation with an error) and drops the store_costs field.
Instance normalize_store_costs(const Instance& inst);

/// Named instance generators for the worked figures.  Unknown id or bad
/// params throw ParseError.  Parameters arrive as text and are parsed per id
/// (rationals as "p/q").
Instance generate(const std::string& id,
                  const std::map<std::string, std::string>& params);

/// The generator ids, for help output.
std::vector<std::string> generator_ids();

}  // namespace marketgraph
