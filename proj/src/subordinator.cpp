#include "rslevy/subordinator.hpp"

#include <boost/math/special_functions/erf.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <boost/math/tools/roots.hpp>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <tuple>

namespace rslevy {

namespace {

std::string describe(const char* what, Complex z) {
  std::ostringstream os;
  os.precision(17);
  os << what << " branch cut: argument (" << z.real() << ", " << z.imag() << ")";
  return os.str();
}

}  // namespace

Complex laplace_exponent(const SubordinatorSpec& spec, Complex s) {
  switch (spec.family) {
    case SubordinatorFamily::Gamma: {
      const Complex w = 1.0 - s / spec.beta;
      if (!(w.real() > 0.0)) throw BranchCutError(describe("gamma log", s));
      return -spec.alpha * std::log(w);
    }
    case SubordinatorFamily::InverseGaussian: {
      const Complex w = spec.beta * spec.beta - 2.0 * s;
      if (!(w.real() > 0.0)) throw BranchCutError(describe("inverse gaussian sqrt", s));
      return -spec.alpha * (std::sqrt(w) - spec.beta);
    }
    case SubordinatorFamily::Identity:
      return s;
  }
  return s;
}

double subordinator_cumulant(const SubordinatorSpec& spec, int n) {
  if (n < 1 || n > 4) throw std::invalid_argument("cumulant order must be 1..4");
  const double a = spec.alpha;
  const double b = spec.beta;
  switch (spec.family) {
    case SubordinatorFamily::Gamma: {
      // alpha (n-1)! / beta^n
      static constexpr double fact[] = {1.0, 1.0, 2.0, 6.0};
      return a * fact[n - 1] / std::pow(b, n);
    }
    case SubordinatorFamily::InverseGaussian: {
      // alpha (2n-3)!! / beta^(2n-1)
      static constexpr double dfact[] = {1.0, 1.0, 3.0, 15.0};
      return a * dfact[n - 1] / std::pow(b, 2 * n - 1);
    }
    case SubordinatorFamily::Identity:
      return n == 1 ? 1.0 : 0.0;
  }
  return 0.0;
}

double sample_gamma(double shape, double rate, RandomStream& rng) {
  if (shape < 1.0) {
    // G(shape) = G(shape + 1) * U^(1/shape), evaluated in logs since shape
    // is often ~1e-3 at daily steps.
    const double g = sample_gamma(shape + 1.0, 1.0, rng);
    const double log_x = std::log(g) + std::log(rng.uniform()) / shape;
    return std::exp(log_x) / rate;
  }
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x = 0.0;
    double v = 0.0;
    do {
      x = rng.normal();
      v = 1.0 + c * x;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = rng.uniform();
    const double x2 = x * x;
    if (u < 1.0 - 0.0331 * x2 * x2) return d * v / rate;
    if (std::log(u) < 0.5 * x2 + d * (1.0 - v + std::log(v))) return d * v / rate;
  }
}

double sample_inverse_gaussian(double mean, double shape, RandomStream& rng) {
  const double nu = rng.normal();
  const double w = mean * nu * nu / (2.0 * shape);
  // mean * (1 + w - sqrt(w^2 + 2w)), rationalised to avoid cancellation for large w.
  const double x = mean / (1.0 + w + std::sqrt(w * (w + 2.0)));
  if (rng.uniform() * (mean + x) <= mean) return x;
  return mean * mean / x;
}

double sample_increment(const SubordinatorSpec& spec, double dt, RandomStream& rng) {
  if (!(dt > 0.0)) throw std::invalid_argument("increment length must be > 0");
  switch (spec.family) {
    case SubordinatorFamily::Gamma:
      return sample_gamma(spec.alpha * dt, spec.beta, rng);
    case SubordinatorFamily::InverseGaussian: {
      const double scale = spec.alpha * dt;
      return sample_inverse_gaussian(scale / spec.beta, scale * scale, rng);
    }
    case SubordinatorFamily::Identity:
      return dt;
  }
  return dt;
}

namespace {

// log Phi(-b), switching to the asymptotic series where erfc underflows.
double log_normal_tail(double b) {
  if (b < 30.0) return std::log(0.5 * std::erfc(b / std::numbers::sqrt2));
  const double b2 = b * b;
  return -0.5 * b2 - std::log(b * std::sqrt(2.0 * std::numbers::pi)) +
         std::log1p(-1.0 / b2 + 3.0 / (b2 * b2) - 15.0 / (b2 * b2 * b2));
}

// Quantile of the inverse Gaussian with mean 1 and shape phi, solved in log x.
// Below the median F(x) = Phi(a) + e^(2 phi) Phi(-b) is matched to u, above it
// the complement, with a = sqrt(phi/x) (x - 1) and b = sqrt(phi/x) (x + 1).
double unit_ig_quantile(double phi, double u) {
  const bool upper = u > 0.5;
  const double target = upper ? 1.0 - u : u;
  auto g = [&](double y) {
    const double x = std::exp(y);
    const double r = std::sqrt(phi / x);
    const double a = r * (x - 1.0), b = r * (x + 1.0);
    const double second = std::exp(2.0 * phi + log_normal_tail(b));
    const double pdf_x = std::sqrt(phi / (2.0 * std::numbers::pi * x)) * std::exp(-0.5 * a * a);
    if (upper) return std::make_tuple(target - (std::exp(log_normal_tail(a)) - second), pdf_x);
    return std::make_tuple(std::exp(log_normal_tail(-a)) + second - target, pdf_x);
  };
  // Log-normal start with the same mean and variance.
  const double s2 = std::log1p(1.0 / phi);
  const double z = -std::numbers::sqrt2 * boost::math::erfc_inv(2.0 * u);
  const double lo = -740.0, hi = 700.0;
  const double guess = std::clamp(-0.5 * s2 + std::sqrt(s2) * z, lo, hi);
  std::uintmax_t iters = 200;
  return std::exp(boost::math::tools::newton_raphson_iterate(g, guess, lo, hi, 46, iters));
}

}  // namespace

double increment_quantile(const SubordinatorSpec& spec, double dt, double u) {
  if (!(dt > 0.0)) throw std::invalid_argument("increment length must be > 0");
  if (!(u > 0.0 && u < 1.0)) throw std::invalid_argument("quantile level must lie in (0, 1)");
  try {
    switch (spec.family) {
      case SubordinatorFamily::Gamma: {
        const double shape = spec.alpha * dt;
        const double g = u <= 0.5 ? boost::math::gamma_p_inv(shape, u) : boost::math::gamma_q_inv(shape, 1.0 - u);
        return g / spec.beta;
      }
      case SubordinatorFamily::InverseGaussian: {
        const double scale = spec.alpha * dt;
        return scale / spec.beta * unit_ig_quantile(scale * spec.beta, u);
      }
      case SubordinatorFamily::Identity:
        return dt;
    }
  } catch (const std::domain_error&) {
    throw;
  } catch (const std::exception& e) {
    throw std::domain_error(std::string("increment quantile: ") + e.what());
  }
  return dt;
}

}  // namespace rslevy
