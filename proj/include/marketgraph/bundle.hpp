#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace marketgraph {

/// Standard normal tail distribution and density.
double normal_sf(double x);
double normal_pdf(double x);

struct MonopolyRev {
  double rev = 0.0;
  double p_star = 0.0;
};

/// Optimal monopoly revenue for value mu + sigma * Z, Z standard normal.
/// sigma == 0 degenerates to (mu, mu).  Requires mu > 0.
MonopolyRev monopoly_rev(double mu, double sigma);

/// Same root-finding core with mu >= 0 admitted (used by quadratures that
/// touch the prior's lower boundary).
MonopolyRev monopoly_rev_core(double mu, double sigma);

/// dRev/dmu = F[(p* - mu)/sigma].
double monopoly_rev_dmu(double mu, double sigma);

/// Crossing point of z*(alpha) - alpha (about 1.253).
double alpha_zero();

/// Revenue of a bundle: Rev(sum mu, sqrt(|S|) * sigma).
double bundle_rev(const std::vector<double>& qualities, double sigma);

struct BundleWindow {
  int lo = 0;  // inclusive indices into the ascending-sorted qualities
  int hi = -1; // hi < lo encodes the empty bundle
  double profit = 0.0;
  std::vector<double> sorted_qualities;
};

/// Best contiguous window (complete information); empty window when no
/// positive-profit bundle exists.
BundleWindow complete_info_optimal_bundle(std::vector<double> qualities,
                                          double sigma);

/// Smallest integer t >= 2 with t / (sqrt(t-1) + 1) > muH / muL.
int t0_threshold(double muL, double muH);

struct UniformPrior {
  double lo = 0.0;
  double hi = 1.0;
};

/// Virtual cost phi(mu) = Rev(mu,sigma) * (1 + Phi(mu) / (phi(mu) p*(mu))).
double virtual_cost(double mu, double sigma, const UniformPrior& prior);

struct ThresholdMechanism {
  // x(mu) = 1 iff mu <= threshold; no seller when threshold < prior.lo.
  double threshold = 0.0;
  bool include_all = false;
  bool include_none = false;
  double payment = 0.0;  // Rev(threshold, sigma) paid to included sellers
};

struct SurrogateResult {
  ThresholdMechanism mechanism;
  double surrogate_profit = 0.0;  // N * E[x(mu) (mu - phi(mu))]
};

/// Ironed threshold mechanism maximizing expected surrogate profit over a
/// quantile grid (default 4096 points).
SurrogateResult surrogate_threshold_mechanism(const UniformPrior& prior,
                                              double sigma, int sellers,
                                              int grid = 4096);

struct SubexponentialParams {
  double gamma = 1.0;
  double xi = 1.0;
};

/// Four-term deviation bound on |Rev(C + sigma sum a_i Z_i) - C|.
double rev_deviation_bound(double C, double sigma,
                           const std::vector<double>& weights,
                           const SubexponentialParams& params);

struct MonteCarloProfit {
  double mean = 0.0;
  double stderr_ = 0.0;
  int trials = 0;
};

/// Seeded Monte-Carlo estimate of the mechanism's expected profit.
MonteCarloProfit monte_carlo_profit(const ThresholdMechanism& mech,
                                    const UniformPrior& prior, double sigma,
                                    int sellers, int trials,
                                    std::uint64_t seed);

enum class PostedPrice { None, Low, High };
enum class ProduceQuality { Low, High };

struct InHousePlan {
  PostedPrice posted_price = PostedPrice::None;
  int produce_count = 0;
  ProduceQuality produce_quality = ProduceQuality::Low;
  double profit = 0.0;
};

struct InHouseStrategy {
  PostedPrice posted_price;
  int produce_count;
  ProduceQuality produce_quality;
  double profit;
};

struct InHouseResult {
  InHousePlan best;
  std::vector<InHouseStrategy> strategies;  // full evaluation table
  double tau_switch_low = 0.0;   // (muH - Rev(muH)) / (muH - Rev(muL))
  double tau_switch_none = 0.0;  // (muH - Rev(muH)) / (muH - muL)
};

/// Exhaustive posted-price / production enumeration for the two-quality
/// market (never mixes production qualities).
InHouseResult two_quality_inhouse(int sellers, int low_sellers, double muL,
                                  double muH, double sigma, int capacity);

std::string to_string(PostedPrice p);
std::string to_string(ProduceQuality q);

}  // namespace marketgraph
