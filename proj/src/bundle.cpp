#include "marketgraph/bundle.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>

namespace marketgraph {

double normal_sf(double x) { return 0.5 * std::erfc(x / std::sqrt(2.0)); }

double normal_pdf(double x) {
  static const double kInvSqrt2Pi = 0.3989422804014326779;
  return kInvSqrt2Pi * std::exp(-0.5 * x * x);
}

namespace {

// First-order condition F[z - a] - z f(z - a) = 0 in z = p / sigma.
double foc(double z, double a) {
  return normal_sf(z - a) - z * normal_pdf(z - a);
}

double solve_zstar(double a) {
  double lo = 0.0, hi = std::max(a, 0.0) + 12.0;
  // foc(0) = F[-a] > 0 and foc(hi) < 0; keep the bracket and bisect.
  if (foc(hi, a) >= 0.0)
    throw std::logic_error("optimal-price bracket failed");
  for (int it = 0; it < 50; ++it) {
    double mid = 0.5 * (lo + hi);
    (foc(mid, a) > 0.0 ? lo : hi) = mid;
  }
  double z = 0.5 * (lo + hi);
  // Newton refinement to machine precision; d/dz = f(z-a) (z (z-a) - 2).
  for (int it = 0; it < 8; ++it) {
    double u = z - a;
    double deriv = normal_pdf(u) * (z * u - 2.0);
    if (deriv == 0.0) break;
    double step = foc(z, a) / deriv;
    if (!std::isfinite(step)) break;
    z -= step;
    if (std::abs(step) <= 1e-14 * std::max(1.0, std::abs(z))) break;
  }
  return z;
}

}  // namespace

MonopolyRev monopoly_rev_core(double mu, double sigma) {
  if (mu < 0.0 || sigma < 0.0)
    throw std::invalid_argument("negative mean or dispersion");
  if (sigma == 0.0) return {mu, mu};
  double a = mu / sigma;
  double z = solve_zstar(a);
  MonopolyRev r;
  r.p_star = sigma * z;
  r.rev = r.p_star * normal_sf(z - a);
  return r;
}

MonopolyRev monopoly_rev(double mu, double sigma) {
  if (mu <= 0.0) throw std::invalid_argument("quality must be positive");
  return monopoly_rev_core(mu, sigma);
}

double monopoly_rev_dmu(double mu, double sigma) {
  if (sigma == 0.0) return 1.0;
  MonopolyRev r = monopoly_rev_core(mu, sigma);
  return normal_sf((r.p_star - mu) / sigma);
}

double alpha_zero() {
  // z*(a) - a changes sign; bisect on it.
  auto g = [](double a) { return solve_zstar(a) - a; };
  double lo = 0.5, hi = 3.0;
  for (int it = 0; it < 200; ++it) {
    double mid = 0.5 * (lo + hi);
    (g(mid) > 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

double bundle_rev(const std::vector<double>& qualities, double sigma) {
  if (qualities.empty()) throw std::invalid_argument("empty bundle");
  double total = std::accumulate(qualities.begin(), qualities.end(), 0.0);
  return monopoly_rev_core(total,
                           std::sqrt(static_cast<double>(qualities.size())) *
                               sigma)
      .rev;
}

BundleWindow complete_info_optimal_bundle(std::vector<double> qualities,
                                          double sigma) {
  std::sort(qualities.begin(), qualities.end());
  const int n = static_cast<int>(qualities.size());
  std::vector<double> solo(n);
  for (int i = 0; i < n; ++i) solo[i] = monopoly_rev(qualities[i], sigma).rev;

  BundleWindow best;
  best.sorted_qualities = qualities;
  for (int lo = 0; lo < n; ++lo) {
    double mu_sum = 0.0, pay = 0.0;
    for (int hi = lo; hi < n; ++hi) {
      mu_sum += qualities[hi];
      pay += solo[hi];
      double profit =
          monopoly_rev_core(mu_sum, std::sqrt(hi - lo + 1.0) * sigma).rev - pay;
      if (profit > best.profit) {
        best.profit = profit;
        best.lo = lo;
        best.hi = hi;
      }
    }
  }
  return best;
}

int t0_threshold(double muL, double muH) {
  if (!(0.0 < muL && muL < muH))
    throw std::invalid_argument("need 0 < muL < muH");
  double ratio = muH / muL;
  for (int t = 2;; ++t) {
    if (static_cast<double>(t) / (std::sqrt(t - 1.0) + 1.0) > ratio) return t;
    if (t > 100000000) throw std::logic_error("threshold scan ran away");
  }
}

double virtual_cost(double mu, double sigma, const UniformPrior& prior) {
  if (!(prior.lo <= mu && mu <= prior.hi))
    throw std::invalid_argument("prior density is zero at mu");
  if (prior.hi <= prior.lo)
    throw std::invalid_argument("degenerate uniform prior");
  MonopolyRev r = monopoly_rev_core(mu, sigma);
  double cdf = (mu - prior.lo) / (prior.hi - prior.lo);
  double density = 1.0 / (prior.hi - prior.lo);
  return r.rev * (1.0 + cdf / (density * r.p_star));
}

SurrogateResult surrogate_threshold_mechanism(const UniformPrior& prior,
                                              double sigma, int sellers,
                                              int grid) {
  if (sellers < 1) throw std::invalid_argument("need at least one seller");
  if (grid < 8) throw std::invalid_argument("quantile grid too small");
  const double span = prior.hi - prior.lo;
  if (span <= 0.0) throw std::invalid_argument("degenerate uniform prior");

  // Quantile-space surrogate profit of the posted-price mechanisms:
  // w'(q) = -q Rev(mu(q), sigma) + int_0^q mu(theta) dtheta.
  std::vector<double> q(grid), w(grid);
  for (int i = 0; i < grid; ++i) {
    q[i] = static_cast<double>(i) / (grid - 1);
    double mu = prior.lo + q[i] * span;
    double integral = prior.lo * q[i] + 0.5 * q[i] * q[i] * span;
    w[i] = -q[i] * monopoly_rev_core(mu, sigma).rev + integral;
  }

  // Upper concave envelope by a monotone-chain upper hull over (q, w).
  std::vector<int> hull;
  for (int i = 0; i < grid; ++i) {
    while (hull.size() >= 2) {
      int a = hull[hull.size() - 2], b = hull[hull.size() - 1];
      double cross = (q[b] - q[a]) * (w[i] - w[a]) -
                     (w[b] - w[a]) * (q[i] - q[a]);
      if (cross >= 0.0)
        hull.pop_back();  // b below the chord a-i: not on the upper hull
      else
        break;
    }
    hull.push_back(i);
  }
  // Ironed virtual surplus rho(q): slope of the envelope at q.
  std::vector<double> rho(grid);
  for (std::size_t seg = 0; seg + 1 < hull.size(); ++seg) {
    int a = hull[seg], b = hull[seg + 1];
    double slope = (w[b] - w[a]) / (q[b] - q[a]);
    for (int i = a; i < b; ++i) rho[i] = slope;
  }
  rho[grid - 1] = rho[grid - 2];

  SurrogateResult res;
  int last_pos = -1;
  for (int i = 0; i < grid; ++i)
    if (rho[i] > 0.0) last_pos = i;
  if (last_pos == -1) {
    res.mechanism.include_none = true;
    res.mechanism.threshold = prior.lo - 1.0;
    return res;
  }
  // Threshold sits at the end of the last positive-slope segment.
  if (last_pos >= grid - 2) {
    res.mechanism.include_all = true;
    res.mechanism.threshold = prior.hi;
  } else {
    res.mechanism.threshold = prior.lo + q[last_pos + 1] * span;
  }
  res.mechanism.payment =
      monopoly_rev_core(res.mechanism.threshold, sigma).rev;

  // Surrogate profit N * E[x(mu)(mu - phi(mu))] by trapezoidal quadrature.
  double upper = std::min(res.mechanism.threshold, prior.hi);
  int steps = grid;
  double h = (upper - prior.lo) / steps;
  double sum = 0.0;
  for (int i = 0; i <= steps; ++i) {
    double mu = prior.lo + h * i;
    double f = (mu - virtual_cost(mu, sigma, prior)) / span;
    sum += (i == 0 || i == steps) ? 0.5 * f : f;
  }
  res.surrogate_profit = sellers * sum * h;
  return res;
}

double rev_deviation_bound(double C, double sigma,
                           const std::vector<double>& weights,
                           const SubexponentialParams& params) {
  if (C <= 0.0) throw std::invalid_argument("C must be positive");
  if (params.gamma <= 0.0 || params.xi <= 0.0)
    throw std::invalid_argument("subexponential parameters must be positive");
  double A = 0.0;
  for (double a : weights) {
    if (a < 0.0 || a > 1.0)
      throw std::invalid_argument("weights must lie in [0,1]");
    A += a * a;
  }
  double t1 = sigma * params.gamma * std::exp(-0.5) * std::sqrt(A);
  double t2 = 8.0 * sigma * params.xi / (3.0 * std::exp(1.0));
  double t3 = std::sqrt(2.0) * sigma * std::sqrt(A);
  double t4 = 2.0 * std::pow(sigma, 2.0 / 3.0) * std::cbrt(C * A);
  return std::max({t1, t2, t3, t4});
}

MonteCarloProfit monte_carlo_profit(const ThresholdMechanism& mech,
                                    const UniformPrior& prior, double sigma,
                                    int sellers, int trials,
                                    std::uint64_t seed) {
  if (trials < 1) throw std::invalid_argument("need at least one trial");
  MonteCarloProfit out;
  out.trials = trials;
  double sum = 0.0, sumsq = 0.0;
  for (int t = 0; t < trials; ++t) {
    // Per-trial generator keeps the reduction order deterministic.
    std::mt19937_64 rng(seed + 0x9e3779b97f4a7c15ULL * (t + 1));
    std::uniform_real_distribution<double> unif(prior.lo, prior.hi);
    double mu_sum = 0.0;
    int included = 0;
    double payments = 0.0;
    for (int i = 0; i < sellers; ++i) {
      double mu = prior.lo == prior.hi ? prior.lo : unif(rng);
      bool in = mech.include_all ||
                (!mech.include_none && mu <= mech.threshold);
      if (in) {
        mu_sum += mu;
        ++included;
        payments += mech.payment;
      }
    }
    double revenue =
        included == 0
            ? 0.0
            : monopoly_rev_core(mu_sum, std::sqrt(included) * sigma).rev;
    double profit = revenue - payments;
    sum += profit;
    sumsq += profit * profit;
  }
  out.mean = sum / trials;
  if (trials > 1) {
    double var = (sumsq - sum * sum / trials) / (trials - 1);
    out.stderr_ = std::sqrt(std::max(var, 0.0) / trials);
  }
  return out;
}

std::string to_string(PostedPrice p) {
  switch (p) {
    case PostedPrice::None: return "none";
    case PostedPrice::Low: return "low";
    case PostedPrice::High: return "high";
  }
  return "none";
}

std::string to_string(ProduceQuality q) {
  return q == ProduceQuality::Low ? "low" : "high";
}

InHouseResult two_quality_inhouse(int sellers, int low_sellers, double muL,
                                  double muH, double sigma, int capacity) {
  if (low_sellers > sellers || low_sellers < 0 || capacity < 0)
    throw std::invalid_argument("bad market composition");
  if (!(0.0 < muL && muL < muH))
    throw std::invalid_argument("need 0 < muL < muH");
  const int high_sellers = sellers - low_sellers;
  const double revL = monopoly_rev(muL, sigma).rev;
  const double revH = monopoly_rev(muH, sigma).rev;

  InHouseResult res;
  res.tau_switch_low = (muH - revH) / (muH - revL);
  res.tau_switch_none = (muH - revH) / (muH - muL);

  auto evaluate = [&](PostedPrice price, int produce, ProduceQuality quality) {
    double bundle_mu = 0.0, pay = 0.0;
    int size = 0;
    if (price == PostedPrice::Low) {
      bundle_mu += low_sellers * muL;
      pay += low_sellers * revL;
      size += low_sellers;
    } else if (price == PostedPrice::High) {
      bundle_mu += low_sellers * muL + high_sellers * muH;
      pay += sellers * revH;
      size += sellers;
    }
    double q = quality == ProduceQuality::Low ? muL : muH;
    bundle_mu += produce * q;
    pay += produce * (quality == ProduceQuality::Low ? revL : revH);
    size += produce;
    double revenue =
        size == 0 ? 0.0
                  : monopoly_rev_core(bundle_mu, std::sqrt(size) * sigma).rev;
    return revenue - pay;
  };

  bool have_best = false;
  for (PostedPrice price :
       {PostedPrice::None, PostedPrice::Low, PostedPrice::High}) {
    for (int produce = 0; produce <= capacity; ++produce) {
      for (ProduceQuality quality : {ProduceQuality::Low, ProduceQuality::High}) {
        if (produce == 0 && quality == ProduceQuality::High)
          continue;  // no production: quality is moot
        double profit = evaluate(price, produce, quality);
        res.strategies.push_back({price, produce, quality, profit});
        // Tie-break: fewer produced units, then lower posted price.
        bool better = !have_best || profit > res.best.profit;
        if (!better && have_best && profit == res.best.profit) {
          if (produce < res.best.produce_count ||
              (produce == res.best.produce_count &&
               static_cast<int>(price) < static_cast<int>(res.best.posted_price)))
            better = true;
        }
        if (better) {
          res.best = {price, produce, quality, profit};
          have_best = true;
        }
      }
    }
  }
  return res;
}

}  // namespace marketgraph
