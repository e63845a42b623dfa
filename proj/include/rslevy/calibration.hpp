#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "rslevy/contract.hpp"
#include "rslevy/cos_pricer.hpp"
#include "rslevy/estimation.hpp"
#include "rslevy/regime_model.hpp"

namespace rslevy {

struct Quote {
  double maturity = 1.0;
  double strike = 1.0;
  OptionKind kind = OptionKind::Call;
  double mid = 0.0;

  ContractSpec contract() const { return {strike, maturity, kind}; }
};

/// Validated option quotes: T > 0, K > 0, mid >= 0, no duplicate (T, K, kind).
class QuoteTable {
 public:
  QuoteTable() = default;
  explicit QuoteTable(std::vector<Quote> rows);

  /// Throws std::invalid_argument on invalid fields or a duplicate key.
  void add(const Quote& q);
  const std::vector<Quote>& rows() const { return rows_; }
  std::size_t size() const { return rows_.size(); }
  bool empty() const { return rows_.empty(); }
  double mean_quote() const;

 private:
  std::vector<Quote> rows_;
};

/// Out-of-the-money rows are priced by Monte Carlo instead of COS.
struct OtmRule {
  bool enabled = true;
  double call_moneyness = 1.05;  ///< call is OTM when K / S0 > this
  double put_moneyness = 0.95;   ///< put is OTM when K / S0 < this

  bool is_otm(const Quote& q, double s0) const;
};

/// Which drift parameters the calibration moves.
enum class DriftMode {
  RiskNeutral,  ///< mu pinned by the martingale condition; fit sigma, alpha, beta
  Free,         ///< fit all four parameters per regime
};

struct CalibConfig {
  double step_tolerance = 1e-10;
  int max_iters = 1000;
  double fd_step = 1e-6;
  OtmRule otm{};
  std::size_t mc_paths = 20000;
  std::uint64_t mc_seed = 1;
  /// Monte Carlo step for the OTM fallback; 0 steps once per regime sojourn.
  double mc_dt = 0.0;
  CosConfig cos{};
  DriftMode drift = DriftMode::RiskNeutral;
  unsigned threads = 0;

  void validate() const;
};

/// Model price of every quote row, in row order. COS per maturity slice,
/// Monte Carlo with a fixed seed for OTM rows. Errors name the failing row.
std::vector<double> model_prices(const SwitchingModel& model, const QuoteTable& quotes, const CalibConfig& config);

/// sqrt(mean (price - mid)^2).
double pricing_rmse(const std::vector<double>& prices, const QuoteTable& quotes);

/// Root-mean-squared pricing error J of `model` against the quotes.
double calib_objective(const SwitchingModel& model, const QuoteTable& quotes, const CalibConfig& config);

struct CalibReport {
  SwitchingModel model;
  int iterations = 0;
  double initial_objective = 0.0;
  double objective = 0.0;
  std::string stop_reason;
  std::vector<double> history;
};

/// Projected gradient descent on J over both regimes' parameters. Switching
/// intensities, s0 and r are taken from `init` and held fixed.
CalibReport calibrate(const QuoteTable& quotes, const SwitchingModel& init, const ParamBounds& bounds,
                      const CalibConfig& config = {});

}  // namespace rslevy
