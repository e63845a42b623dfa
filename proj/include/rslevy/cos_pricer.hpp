#pragma once

#include <optional>
#include <stdexcept>
#include <vector>

#include "rslevy/charfn.hpp"
#include "rslevy/contract.hpp"

namespace rslevy {

/// Raised when a COS sum is meaningfully negative (beyond -1e-8).
class PricingError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct TruncationInterval {
  double a = -1.0;
  double b = 1.0;
  double width() const { return b - a; }
};

struct CosConfig {
  int n_terms = 512;
  /// Fixed interval for y = log(S_T / K); the cumulant rule is used when empty.
  std::optional<TruncationInterval> interval;
  double cumulant_scale = 10.0;

  void validate() const;
};

/// First, second and fourth cumulants.
struct Cumulants {
  double c1 = 0.0;
  double c2 = 0.0;
  double c4 = 0.0;
};

/// Cumulants of y0 + Z_t from finite differences of log(phi) at 0.
///
/// A first pass with step 1e-4 estimates the mean and standard deviation;
/// the second pass differentiates the mean-removed log-CF with a step
/// proportional to 1/sd, combined by Richardson extrapolation.
Cumulants log_return_cumulants(const CharFn& cf);

/// Interval for y = log(S_T / K) where cf carries y0 = log(S0 / K).
/// Returns the configured interval verbatim, otherwise
/// [c1 - L sqrt(c2 + sqrt|c4|), c1 + L sqrt(c2 + sqrt|c4|)].
TruncationInterval truncation_interval(const CharFn& cf, const CosConfig& config);

/// Cosine coefficients V_k of the put payoff K (1 - e^y)^+ on [a, b].
/// Integrates over [a, min(b, 0)]; all zero when a >= 0.
std::vector<double> put_coefficients(double strike, double a, double b, int n_terms);

/// COS put price. `cf` must have horizon equal to the maturity and
/// y0 = log(S0 / K).
double price_put(const CharFn& cf, const ContractSpec& contract, const CosConfig& config = {});
/// COS call price through put-call parity applied once after summation.
double price_call(const CharFn& cf, const ContractSpec& contract, const CosConfig& config = {});

/// Builds the log-moneyness-centred CF and prices either kind.
double cos_price(const SwitchingModel& model, const ContractSpec& contract, const CosConfig& config = {});

/// COS pricing of many strikes at one maturity.
///
/// The characteristic function grid is evaluated once: with the cumulant
/// rule every strike uses the same interval width, hence the same frequencies.
class CosSlice {
 public:
  CosSlice(const SwitchingModel& model, double maturity, const CosConfig& config = {});

  double put(double strike) const;
  double call(double strike) const;
  double price(double strike, OptionKind kind) const { return kind == OptionKind::Call ? call(strike) : put(strike); }

  double maturity() const { return maturity_; }
  /// Interval used for `strike`.
  TruncationInterval interval(double strike) const;

 private:
  SwitchingModel model_;
  double maturity_;
  CosConfig config_;
  Cumulants z_cumulants_{};
  double width_ = 0.0;
  std::vector<Complex> phi_z_;  // phi_Z(k pi / width)
};

}  // namespace rslevy
