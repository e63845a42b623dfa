#include "rslevy/complex_matrix.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace rslevy {

namespace {

constexpr int kPadeOrder = 6;
constexpr double kScaledNormBound = 0.5;

// c_j = (2m - j)! m! / ((2m)! j! (m - j)!)
constexpr std::array<double, kPadeOrder + 1> pade_coefficients() {
  std::array<double, kPadeOrder + 1> c{};
  c[0] = 1.0;
  for (int j = 1; j <= kPadeOrder; ++j) {
    c[j] = c[j - 1] * static_cast<double>(kPadeOrder - j + 1) /
           static_cast<double>(j * (2 * kPadeOrder - j + 1));
  }
  return c;
}

}  // namespace

double ComplexMatrix2::norm_inf() const {
  return std::max(std::abs(m[0]) + std::abs(m[1]), std::abs(m[2]) + std::abs(m[3]));
}

bool ComplexMatrix2::is_finite() const {
  return std::all_of(m.begin(), m.end(),
                     [](const Complex& z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); });
}

ComplexMatrix2& ComplexMatrix2::operator+=(const ComplexMatrix2& o) {
  for (std::size_t i = 0; i < 4; ++i) m[i] += o.m[i];
  return *this;
}

ComplexMatrix2& ComplexMatrix2::operator-=(const ComplexMatrix2& o) {
  for (std::size_t i = 0; i < 4; ++i) m[i] -= o.m[i];
  return *this;
}

ComplexMatrix2& ComplexMatrix2::operator*=(Complex s) {
  for (auto& z : m) z *= s;
  return *this;
}

ComplexMatrix2 operator*(const ComplexMatrix2& a, const ComplexMatrix2& b) {
  return {{a.m[0] * b.m[0] + a.m[1] * b.m[2], a.m[0] * b.m[1] + a.m[1] * b.m[3],
           a.m[2] * b.m[0] + a.m[3] * b.m[2], a.m[2] * b.m[1] + a.m[3] * b.m[3]}};
}

ComplexMatrix2 inverse(const ComplexMatrix2& a) {
  const Complex det = a.determinant();
  return {{a.m[3] / det, -a.m[1] / det, -a.m[2] / det, a.m[0] / det}};
}

ComplexMatrix2 matrix_exp(const ComplexMatrix2& a) {
  if (!a.is_finite()) throw std::invalid_argument("matrix_exp: non-finite entries");
  static constexpr auto c = pade_coefficients();

  const double norm = a.norm_inf();
  int squarings = 0;
  if (norm > kScaledNormBound) {
    squarings = std::max(0, static_cast<int>(std::ceil(std::log2(norm / kScaledNormBound))));
    // guard against log2 rounding either way
    while (std::ldexp(norm, -squarings) > kScaledNormBound) ++squarings;
    while (squarings > 0 && std::ldexp(norm, -(squarings - 1)) <= kScaledNormBound) --squarings;
  }
  const ComplexMatrix2 x = a * Complex(std::ldexp(1.0, -squarings));

  const ComplexMatrix2 id = ComplexMatrix2::identity();
  const ComplexMatrix2 x2 = x * x;
  const ComplexMatrix2 x4 = x2 * x2;
  const ComplexMatrix2 x6 = x4 * x2;
  const ComplexMatrix2 odd = x * (c[1] * id + c[3] * x2 + c[5] * x4);
  const ComplexMatrix2 even = c[0] * id + c[2] * x2 + c[4] * x4 + c[6] * x6;

  ComplexMatrix2 result = inverse(even - odd) * (even + odd);
  for (int k = 0; k < squarings; ++k) result = result * result;
  return result;
}

}  // namespace rslevy
