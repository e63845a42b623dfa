#pragma once

#include "rslevy/contract.hpp"

namespace rslevy {

/// Standard Black-Scholes price of a European option (no dividends).
/// A zero sigma gives the discounted intrinsic value of the forward.
double bs_closed_form(double s0, double strike, double r, double sigma, double maturity, OptionKind kind);

}  // namespace rslevy
