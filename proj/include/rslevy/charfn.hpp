#pragma once

#include <complex>
#include <functional>

#include "rslevy/complex_matrix.hpp"
#include "rslevy/regime_model.hpp"
#include "rslevy/subordinator.hpp"

namespace rslevy {

/// Characteristic exponent of the time-changed regime process Y^j:
/// Psi(u) = l(i mu u - sigma^2 u^2 / 2), so E[exp(i u Y_t)] = exp(t Psi(u)).
Complex regime_char_exponent(const RegimeParams& params, SubordinatorFamily family, Complex u);

/// [[-l12 + Psi1(u), l12], [l21, -l21 + Psi2(u)]]
ComplexMatrix2 phi_matrix(const SwitchingModel& model, Complex u);

/// Characteristic function of y0 + Z_t for the switching model started in regime 1.
class CharFn {
 public:
  /// y0 defaults to log(s0).
  CharFn(SwitchingModel model, double t);
  CharFn(SwitchingModel model, double t, double y0);

  /// exp(i u y0) * e1' exp(t Phi(u)) 1
  Complex operator()(Complex u) const;
  /// Characteristic function of Z_t alone (y0 = 0).
  Complex log_return(Complex u) const;

  CharFn recentered(double y0) const { return CharFn(model_, t_, y0); }

  const SwitchingModel& model() const { return model_; }
  double horizon() const { return t_; }
  double y0() const { return y0_; }

 private:
  SwitchingModel model_;
  double t_;
  double y0_;
};

inline Complex switching_cf(const CharFn& cf, Complex u) { return cf(u); }

/// Drift mu making exp(-r t) exp(Y_t) a martingale, i.e. Psi(-i) = r.
/// Found by bracketed root finding on the implemented exponent.
/// Throws std::domain_error for IG when beta < r / alpha.
double risk_neutral_drift(const RegimeParams& params, SubordinatorFamily family, double r);

/// Copy of `model` with both regime drifts replaced by their risk-neutral values.
SwitchingModel with_risk_neutral_drift(SwitchingModel model);

using CharExponent = std::function<Complex(Complex)>;

/// Esscher-tilted exponent Psi_theta(u) = Psi(u - i theta) - Psi(-i theta).
/// Throws std::domain_error when E[exp(theta Y_1)] is infinite.
CharExponent esscher_tilt(const RegimeParams& params, SubordinatorFamily family, double theta);

}  // namespace rslevy
