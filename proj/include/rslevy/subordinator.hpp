#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include "rslevy/random.hpp"
#include "rslevy/regime_model.hpp"

namespace rslevy {

using Complex = std::complex<double>;

/// Raised when a complex exponent is evaluated across a branch cut.
class BranchCutError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

struct SubordinatorSpec {
  SubordinatorFamily family = SubordinatorFamily::Gamma;
  double alpha = 1.0;
  double beta = 1.0;

  static SubordinatorSpec of(const RegimeParams& p, SubordinatorFamily family) { return {family, p.alpha, p.beta}; }
};

/// Laplace exponent l(s) with E[exp(s L_t)] = exp(t l(s)).
///
///   Gamma:    l(s) = -alpha log(1 - s/beta)          needs Re(1 - s/beta) > 0
///   IG:       l(s) = -alpha (sqrt(beta^2 - 2s) - beta) needs Re(beta^2 - 2s) > 0
///   Identity: l(s) = s
Complex laplace_exponent(const SubordinatorSpec& spec, Complex s);

/// n-th cumulant of L_1 (n = 1..4), i.e. the n-th derivative of l at 0.
double subordinator_cumulant(const SubordinatorSpec& spec, int n);

/// Draws L_{t+dt} - L_t. Gamma(shape alpha*dt, rate beta); IG with mean
/// alpha*dt/beta and shape (alpha*dt)^2; Identity returns dt.
double sample_increment(const SubordinatorSpec& spec, double dt, RandomStream& rng);

/// Inverse CDF of L_{t+dt} - L_t at level u in (0, 1). For fixed u the result
/// is smooth in (alpha, beta), which keeps simulated objectives under common
/// random numbers differentiable.
double increment_quantile(const SubordinatorSpec& spec, double dt, double u);

/// Gamma(shape, rate) via Marsaglia-Tsang, with the U^(1/shape) boost for shape < 1.
double sample_gamma(double shape, double rate, RandomStream& rng);

/// Inverse Gaussian with given mean and shape (Michael-Schucany-Haas).
double sample_inverse_gaussian(double mean, double shape, RandomStream& rng);

}  // namespace rslevy
