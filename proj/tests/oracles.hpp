#pragma once

// Independent reference implementations used only by the tests.

#include <cmath>
#include <complex>

#include "rslevy/complex_matrix.hpp"

namespace rslevy::oracle {

/// exp(A) for a 2x2 matrix from its eigenstructure:
/// e^{m} [cosh(d) I + sinh(d)/d (A - m I)], m = tr/2, d = sqrt(m^2 - det).
inline ComplexMatrix2 expm_2x2(const ComplexMatrix2& a) {
  const Complex m = 0.5 * a.trace();
  const Complex d = std::sqrt(m * m - a.determinant());
  Complex c, s;
  if (std::abs(d) < 1e-4) {
    const Complex d2 = d * d;
    c = 1.0 + d2 / 2.0 + d2 * d2 / 24.0 + d2 * d2 * d2 / 720.0;
    s = 1.0 + d2 / 6.0 + d2 * d2 / 120.0 + d2 * d2 * d2 / 5040.0;
  } else {
    c = std::cosh(d);
    s = std::sinh(d) / d;
  }
  ComplexMatrix2 shifted = a - ComplexMatrix2::identity() * m;
  return (ComplexMatrix2::identity() * c + shifted * s) * std::exp(m);
}

/// Black-Scholes call written independently of the library (via std::erf).
inline double bs_call(double s0, double k, double r, double sigma, double t) {
  const double sd = sigma * std::sqrt(t);
  const double d1 = (std::log(s0 / k) + (r + 0.5 * sigma * sigma) * t) / sd;
  const double d2 = d1 - sd;
  const auto ncdf = [](double x) { return 0.5 * (1.0 + std::erf(x / std::sqrt(2.0))); };
  return s0 * ncdf(d1) - k * std::exp(-r * t) * ncdf(d2);
}

}  // namespace rslevy::oracle
