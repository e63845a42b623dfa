#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "rslevy/date.hpp"
#include "rslevy/optimize.hpp"
#include "rslevy/regime_model.hpp"

namespace rslevy {

struct ReturnSeries {
  std::vector<Date> dates;  ///< date of the closing price ending each return
  std::vector<double> log_returns;
  double dt = kTradingDay;
};

struct DescriptiveStats {
  double mean = 0.0;
  double variance = 0.0;  ///< unbiased (n - 1)
  double skewness = 0.0;
  double kurtosis = 0.0;  ///< non-excess; 3 for a normal sample
};

/// Throws std::invalid_argument for n < 4 or a constant series.
DescriptiveStats descriptive_stats(std::span<const double> x);

/// Regime 2 iff |z| > threshold.
struct AbsThreshold {
  double threshold = 3.0;
};

/// Regime 1 inside any inclusive [first, last] window, regime 2 elsewhere.
struct DateWindows {
  std::vector<std::pair<Date, Date>> windows;
};

using SegmentationRule = std::variant<AbsThreshold, DateWindows>;

/// Labels in {1, 2}, one per return.
std::vector<int> segment_regimes(const ReturnSeries& series, const SegmentationRule& rule);

/// Mean sojourn per regime (years) = days in regime / number of maximal runs * dt.
struct HoldingRates {
  double sojourn1 = 0.0;
  double sojourn2 = 0.0;
  std::size_t days1 = 0;
  std::size_t days2 = 0;
  std::size_t runs1 = 0;
  std::size_t runs2 = 0;

  double lambda12() const { return 1.0 / sojourn1; }
  double lambda21() const { return 1.0 / sojourn2; }
};

/// Throws std::invalid_argument when either regime never occurs.
HoldingRates holding_rates(std::span<const int> labels, double dt = kTradingDay);

/// Returns of one regime, in original order.
std::vector<double> select_regime(std::span<const double> returns, std::span<const int> labels, int regime);

/// (1/n) sum exp(i u z_k).
std::complex<double> empirical_cf(std::span<const double> returns, double u);

/// Box constraints per coordinate of (mu, sigma, alpha, beta).
struct ParamBounds {
  RegimeParams lower{-1.0, 1e-6, 1e-6, 1e-6};
  RegimeParams upper{1.0, 5.0, 100.0, 100.0};

  bool contains(const RegimeParams& p) const;
  RegimeParams clamp(const RegimeParams& p) const;
  Box box() const;
};

std::array<double, 4> to_array(const RegimeParams& p);
RegimeParams from_array(std::span<const double> x);

/// Raised when an estimator fails; carries the best point found.
class FitError : public std::runtime_error {
 public:
  FitError(const std::string& what, RegimeParams best, double residual)
      : std::runtime_error(what), best_(best), residual_(residual) {}
  const RegimeParams& best() const { return best_; }
  double residual() const { return residual_; }

 private:
  RegimeParams best_;
  double residual_;
};

struct FitResult {
  RegimeParams params;
  /// Residual norm (mom), distance (mde) or negative log-likelihood (mle).
  double objective = 0.0;
  int iterations = 0;
  std::string stop_reason;
};

/// E[Y^k], k = 1..4, for the single-regime increment over dt.
std::array<double, 4> model_raw_moments(const RegimeParams& p, SubordinatorFamily family, double dt);
/// (1/n) sum z^k, k = 1..4.
std::array<double, 4> sample_raw_moments(std::span<const double> x);

/// Starting point from sample mean, variance and excess kurtosis, taking
/// E[L_1] = 1 so the subordinator variance carries the excess kurtosis.
RegimeParams moment_initial_guess(std::span<const double> returns, SubordinatorFamily family,
                                  const ParamBounds& bounds = {}, double dt = kTradingDay);

/// Method of moments: least-squares match of the first four raw moments
/// (standardized by powers of sqrt(m2)) with a Levenberg-Marquardt trust-region
/// solver, then clamps to bounds. Only three parameter combinations are
/// identified, so alpha / beta stays at its value in `init`. Throws FitError
/// when the solver fails or the residual shows the moments are out of reach
/// (above 0.1; for a sample, above three standard errors of its fourth
/// standardized moment if that is larger).
FitResult mom_fit(const std::array<double, 4>& target_moments, SubordinatorFamily family, const ParamBounds& bounds,
                  const RegimeParams& init, double dt = kTradingDay);
FitResult mom_fit(std::span<const double> returns, SubordinatorFamily family, const ParamBounds& bounds,
                  const RegimeParams& init, double dt = kTradingDay);

/// Characteristic function of the single-regime increment over dt.
std::complex<double> increment_cf(const RegimeParams& p, SubordinatorFamily family, double dt, double u);

/// Gauss-Hermite nodes/weights for weight exp(-x^2) (Golub-Welsch).
struct GaussHermite {
  std::vector<double> nodes;
  std::vector<double> weights;
};
GaussHermite gauss_hermite(int n);

/// Weighted L2 distance between model and empirical CFs with weight N(0,1).
class CfDistance {
 public:
  CfDistance(std::span<const double> returns, SubordinatorFamily family, double dt = kTradingDay, int nodes = 64);
  /// Squared distance.
  double squared(const RegimeParams& p) const;
  double operator()(const RegimeParams& p) const;

 private:
  SubordinatorFamily family_;
  double dt_;
  std::vector<double> u_;
  std::vector<double> w_;
  std::vector<std::complex<double>> empirical_;
};

/// Minimum-distance fit on the empirical characteristic function. Requires n >= 30.
FitResult mde_fit(std::span<const double> returns, SubordinatorFamily family, const ParamBounds& bounds,
                  const RegimeParams& init, double dt = kTradingDay);

/// Simulated log-likelihood: n_sim increments over dt with common random
/// numbers from `seed`, Gaussian KDE, density floored at 1e-300.
double simulated_log_likelihood(const RegimeParams& p, SubordinatorFamily family, double dt,
                                std::span<const double> returns, std::size_t n_sim, std::uint64_t seed);

/// Maximises simulated_log_likelihood. Requires n_sim >= 10^4.
FitResult mle_fit(std::span<const double> returns, SubordinatorFamily family, const ParamBounds& bounds,
                  const RegimeParams& init, std::size_t n_sim, std::uint64_t seed, double dt = kTradingDay);

}  // namespace rslevy
