#pragma once

#include <array>
#include <complex>

namespace rslevy {

using Complex = std::complex<double>;

/// Dense 2x2 complex matrix, row-major.
struct ComplexMatrix2 {
  std::array<Complex, 4> m{};

  static ComplexMatrix2 identity() { return {{Complex(1.0), Complex(0.0), Complex(0.0), Complex(1.0)}}; }
  static ComplexMatrix2 diagonal(Complex d0, Complex d1) { return {{d0, Complex(0.0), Complex(0.0), d1}}; }

  Complex& operator()(int i, int j) { return m[static_cast<std::size_t>(2 * i + j)]; }
  const Complex& operator()(int i, int j) const { return m[static_cast<std::size_t>(2 * i + j)]; }

  Complex trace() const { return m[0] + m[3]; }
  Complex determinant() const { return m[0] * m[3] - m[1] * m[2]; }
  /// Maximum absolute row sum.
  double norm_inf() const;
  bool is_finite() const;

  ComplexMatrix2& operator+=(const ComplexMatrix2& o);
  ComplexMatrix2& operator-=(const ComplexMatrix2& o);
  ComplexMatrix2& operator*=(Complex s);

  friend ComplexMatrix2 operator+(ComplexMatrix2 a, const ComplexMatrix2& b) { return a += b; }
  friend ComplexMatrix2 operator-(ComplexMatrix2 a, const ComplexMatrix2& b) { return a -= b; }
  friend ComplexMatrix2 operator*(ComplexMatrix2 a, Complex s) { return a *= s; }
  friend ComplexMatrix2 operator*(Complex s, ComplexMatrix2 a) { return a *= s; }
  friend ComplexMatrix2 operator*(const ComplexMatrix2& a, const ComplexMatrix2& b);
};

/// Inverse; the caller guarantees a nonzero determinant.
ComplexMatrix2 inverse(const ComplexMatrix2& a);

/// Matrix exponential by scaling and squaring with a [6/6] Pade approximant.
///
/// The scaling power s is the smallest nonnegative integer with
/// ||A / 2^s||_inf <= 0.5.
ComplexMatrix2 matrix_exp(const ComplexMatrix2& a);

}  // namespace rslevy
