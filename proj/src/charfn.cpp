#include "rslevy/charfn.hpp"

#include <boost/math/tools/roots.hpp>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace rslevy {

namespace {

constexpr Complex kI{0.0, 1.0};

// Supremum of real s where the subordinator has an exponential moment.
double moment_edge(const SubordinatorSpec& spec) {
  switch (spec.family) {
    case SubordinatorFamily::Gamma:
      return spec.beta;
    case SubordinatorFamily::InverseGaussian:
      return 0.5 * spec.beta * spec.beta;
    case SubordinatorFamily::Identity:
      return std::numeric_limits<double>::infinity();
  }
  return 0.0;
}

}  // namespace

Complex regime_char_exponent(const RegimeParams& params, SubordinatorFamily family, Complex u) {
  const Complex s = kI * params.mu * u - 0.5 * params.sigma * params.sigma * u * u;
  return laplace_exponent(SubordinatorSpec::of(params, family), s);
}

ComplexMatrix2 phi_matrix(const SwitchingModel& model, Complex u) {
  const Complex psi1 = regime_char_exponent(model.regimes[0], model.family, u);
  const Complex psi2 = regime_char_exponent(model.regimes[1], model.family, u);
  return {{-model.lambda12 + psi1, Complex(model.lambda12), Complex(model.lambda21), -model.lambda21 + psi2}};
}

CharFn::CharFn(SwitchingModel model, double t) : CharFn(model, t, std::log(model.s0)) {}

CharFn::CharFn(SwitchingModel model, double t, double y0) : model_(std::move(model)), t_(t), y0_(y0) {
  model_.validate();
  if (!(t_ > 0.0)) throw std::invalid_argument("characteristic function horizon must be > 0");
  if (!std::isfinite(y0_)) throw std::invalid_argument("y0 must be finite");
}

Complex CharFn::log_return(Complex u) const {
  if (u == Complex(0.0)) return Complex(1.0);
  const ComplexMatrix2 e = matrix_exp(phi_matrix(model_, u) * Complex(t_));
  return e(0, 0) + e(0, 1);
}

Complex CharFn::operator()(Complex u) const {
  if (u == Complex(0.0)) return Complex(1.0);
  return std::exp(kI * u * y0_) * log_return(u);
}

double risk_neutral_drift(const RegimeParams& params, SubordinatorFamily family, double r) {
  params.validate();
  const SubordinatorSpec spec = SubordinatorSpec::of(params, family);
  const double half_var = 0.5 * params.sigma * params.sigma;
  if (family == SubordinatorFamily::Identity) return r - half_var;

  // Psi(-i) = l(mu + sigma^2/2), real and increasing in s = mu + sigma^2/2 on (-inf, edge).
  const double edge = moment_edge(spec);
  auto excess = [&](double s) {
    if (family == SubordinatorFamily::InverseGaussian && s >= edge) return params.alpha * params.beta - r;
    return laplace_exponent(spec, Complex(s)).real() - r;
  };

  if (family == SubordinatorFamily::InverseGaussian) {
    const double sup = params.alpha * params.beta;  // l(edge)
    if (r > sup) {
      throw std::domain_error("inverse gaussian risk-neutral drift needs beta >= r/alpha (beta=" +
                              std::to_string(params.beta) + ", r/alpha=" + std::to_string(r / params.alpha) + ")");
    }
    if (r == sup) return edge - half_var;
  }

  double hi = edge;
  double width = std::max(1.0, std::abs(edge));
  double lo = edge - width;
  while (excess(lo) > 0.0) {
    width *= 2.0;
    lo = edge - width;
    if (!std::isfinite(lo)) throw std::domain_error("risk-neutral drift: failed to bracket root");
  }
  if (family == SubordinatorFamily::Gamma) {
    // l -> +inf at the edge; step back inside until the sign changes.
    double gap = 0.5 * (edge - lo);
    hi = edge - gap;
    while (excess(hi) < 0.0) {
      gap *= 0.5;
      hi = edge - gap;
      if (gap < std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(edge))) {
        throw std::domain_error("risk-neutral drift: failed to bracket root");
      }
    }
  } else {
    hi = edge;
  }
  if (excess(lo) == 0.0) return lo - half_var;
  if (excess(hi) == 0.0) return hi - half_var;

  std::uintmax_t max_iter = 200;
  const auto [a, b] = boost::math::tools::toms748_solve(excess, lo, hi, boost::math::tools::eps_tolerance<double>(52),
                                                         max_iter);
  const double s = std::abs(excess(a)) <= std::abs(excess(b)) ? a : b;
  return s - half_var;
}

SwitchingModel with_risk_neutral_drift(SwitchingModel model) {
  for (auto& p : model.regimes) p.mu = risk_neutral_drift(p, model.family, model.r);
  return model;
}

CharExponent esscher_tilt(const RegimeParams& params, SubordinatorFamily family, double theta) {
  params.validate();
  const Complex shift(0.0, -theta);
  Complex base;
  try {
    base = regime_char_exponent(params, family, shift);
  } catch (const BranchCutError&) {
    throw std::domain_error("esscher tilt: exponential moment of order " + std::to_string(theta) + " does not exist");
  }
  if (!std::isfinite(base.real()) || !std::isfinite(base.imag())) {
    throw std::domain_error("esscher tilt: exponential moment of order " + std::to_string(theta) + " is infinite");
  }
  return [params, family, shift, base](Complex u) { return regime_char_exponent(params, family, u + shift) - base; };
}

}  // namespace rslevy
