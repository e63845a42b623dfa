#include "rslevy/black_scholes.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace rslevy {

namespace {
double norm_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }
}  // namespace

double bs_closed_form(double s0, double strike, double r, double sigma, double maturity, OptionKind kind) {
  if (!(s0 > 0.0 && strike > 0.0 && maturity > 0.0 && sigma >= 0.0)) {
    throw std::invalid_argument("bs_closed_form: s0, strike, maturity must be > 0 and sigma >= 0");
  }
  const double discount = std::exp(-r * maturity);
  if (sigma == 0.0) {
    const double forward_value = s0 - strike * discount;
    return kind == OptionKind::Call ? std::max(forward_value, 0.0) : std::max(-forward_value, 0.0);
  }
  const double vol = sigma * std::sqrt(maturity);
  const double d1 = (std::log(s0 / strike) + (r + 0.5 * sigma * sigma) * maturity) / vol;
  const double d2 = d1 - vol;
  if (kind == OptionKind::Call) return s0 * norm_cdf(d1) - strike * discount * norm_cdf(d2);
  return strike * discount * norm_cdf(-d2) - s0 * norm_cdf(-d1);
}

}  // namespace rslevy
