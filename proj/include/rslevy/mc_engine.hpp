#pragma once

#include <cstdint>
#include <vector>

#include "rslevy/contract.hpp"
#include "rslevy/random.hpp"
#include "rslevy/regime_model.hpp"

namespace rslevy {

/// Two-sided 95% normal quantile.
inline constexpr double kZ95 = 1.959964;

/// Simulated trajectory; log_prices are Z relative to log(S0), so Z_0 = 0.
/// regimes[i] is the regime active on (times[i-1], times[i]]; regimes[0] = 1.
struct PricePath {
  std::vector<double> times;
  std::vector<double> log_prices;
  std::vector<int> regimes;
};

/// Euler scheme on a grid of step dt refined to contain every switch time.
/// Each step adds mu_j dL + sigma_j sqrt(dL) N(0,1), dL drawn over the step length.
PricePath simulate_path(const SwitchingModel& model, double horizon, double dt, RandomStream& rng);

/// Z_T only, same scheme and random-number consumption as simulate_path.
double simulate_terminal(const SwitchingModel& model, double horizon, double dt, RandomStream& rng);

struct McConfig {
  std::size_t n_paths = 100000;
  /// Step length; 0 means one step per regime sojourn (exact for these models).
  double dt = kTradingDay;
  std::uint64_t seed = 1;
  unsigned threads = 0;
};

/// Z_T for paths 0..n-1, path i driven by RandomStream(seed, i).
std::vector<double> simulate_terminals(const SwitchingModel& model, double horizon, const McConfig& config);

struct McResult {
  double price = 0.0;
  double std_error = 0.0;
  double ci_lo = 0.0;
  double ci_hi = 0.0;
  std::size_t n_paths = 0;
  std::uint64_t seed = 0;
};

/// Summarises discounted payoffs: mean, s / sqrt(m), and mean -+ z95 s / sqrt(m).
McResult summarize_payoffs(const std::vector<double>& discounted_payoffs, std::uint64_t seed);

/// exp(-rT) * mean (payoff) with a 95% confidence interval. Requires n_paths >= 100.
McResult price_european_mc(const SwitchingModel& model, const ContractSpec& contract, const McConfig& config);

/// Prices several contracts of one maturity on the same simulated paths.
std::vector<McResult> price_european_mc(const SwitchingModel& model, double maturity,
                                        const std::vector<ContractSpec>& contracts, const McConfig& config);

}  // namespace rslevy
