#include <gtest/gtest.h>

#include <cmath>

#include "rslevy/charfn.hpp"
#include "rslevy/estimation.hpp"
#include "rslevy/mc_engine.hpp"
#include "rslevy/random.hpp"

using namespace rslevy;

namespace {

SwitchingModel random_model(RandomStream& rng, SubordinatorFamily fam) {
  SwitchingModel m;
  m.family = fam;
  m.s0 = 50 + 100 * rng.uniform();
  m.r = 0.05 * rng.uniform();
  m.lambda12 = 5 * rng.uniform();
  m.lambda21 = 5 * rng.uniform();
  for (auto& p : m.regimes) p = {rng.uniform() - 0.5, 0.05 + rng.uniform(), 0.1 + 5 * rng.uniform(), 0.1 + 5 * rng.uniform()};
  return m;
}

}  // namespace

TEST(CharExponent, VanishesAtZero) {
  RandomStream rng(31);
  for (auto fam : {SubordinatorFamily::Gamma, SubordinatorFamily::InverseGaussian, SubordinatorFamily::Identity}) {
    const RegimeParams p{0.3, 0.4, 2.0, 3.0};
    EXPECT_EQ(regime_char_exponent(p, fam, Complex(0.0)), Complex(0.0));
  }
}

TEST(CharExponent, IdentityIsBlackScholes) {
  const RegimeParams p{0.07, 0.3, 9.0, 9.0};
  for (double u : {-3.0, 0.5, 7.0}) {
    const Complex expected(-0.5 * 0.09 * u * u, 0.07 * u);
    EXPECT_NEAR(std::abs(regime_char_exponent(p, SubordinatorFamily::Identity, Complex(u)) - expected), 0.0, 1e-15);
  }
}

TEST(CharExponent, GammaMatchesSimulatedIncrements) {
  const RegimeParams p{0.01, 1.0, 0.1, 0.1};
  const SubordinatorSpec spec = SubordinatorSpec::of(p, SubordinatorFamily::Gamma);
  RandomStream rng(32);
  const int n = 1000000;
  std::vector<double> y(n);
  for (auto& v : y) {
    const double dl = sample_increment(spec, 1.0, rng);
    v = p.mu * dl + p.sigma * std::sqrt(dl) * rng.normal();
  }
  const Complex model = std::exp(regime_char_exponent(p, SubordinatorFamily::Gamma, Complex(1.0)));
  const Complex emp = empirical_cf(y, 1.0);
  double sc = 0.0, ss = 0.0;
  for (double v : y) {
    sc += std::pow(std::cos(v) - emp.real(), 2);
    ss += std::pow(std::sin(v) - emp.imag(), 2);
  }
  EXPECT_LT(std::abs(model.real() - emp.real()), 3 * std::sqrt(sc / n / n));
  EXPECT_LT(std::abs(model.imag() - emp.imag()), 3 * std::sqrt(ss / n / n));
}

TEST(PhiMatrix, Structure) {
  SwitchingModel m;
  m.family = SubordinatorFamily::Gamma;
  m.lambda12 = 5;
  m.lambda21 = 2;
  m.regimes = {RegimeParams{0.1, 0.2, 1.0, 2.0}, RegimeParams{-0.1, 0.5, 3.0, 1.0}};
  const ComplexMatrix2 q = phi_matrix(m, Complex(0.0));
  EXPECT_EQ(q(0, 0), Complex(-5.0));
  EXPECT_EQ(q(0, 1), Complex(5.0));
  EXPECT_EQ(q(1, 0), Complex(2.0));
  EXPECT_EQ(q(1, 1), Complex(-2.0));
  const ComplexMatrix2 a = phi_matrix(m, Complex(2.5));
  EXPECT_EQ(a(0, 1), Complex(5.0));
  EXPECT_EQ(a(1, 0), Complex(2.0));
  m.lambda12 = m.lambda21 = 0;
  const ComplexMatrix2 d = phi_matrix(m, Complex(1.5));
  EXPECT_EQ(d(0, 1), Complex(0.0));
  EXPECT_EQ(d(0, 0), regime_char_exponent(m.regimes[0], m.family, Complex(1.5)));
  EXPECT_EQ(d(1, 1), regime_char_exponent(m.regimes[1], m.family, Complex(1.5)));
}

TEST(SwitchingCf, InvariantsOverRandomModels) {
  RandomStream rng(33);
  for (int i = 0; i < 200; ++i) {
    const auto fam = i % 2 ? SubordinatorFamily::Gamma : SubordinatorFamily::InverseGaussian;
    const SwitchingModel m = random_model(rng, fam);
    const CharFn cf(m, 0.1 + 2 * rng.uniform());
    ASSERT_EQ(cf(Complex(0.0)), Complex(1.0));
    for (double u : {0.3, 1.0, 4.0, 17.0}) {
      const Complex a = cf(Complex(u)), b = cf(Complex(-u));
      ASSERT_LE(std::abs(a), 1.0 + 1e-12);
      ASSERT_NEAR(std::abs(a - std::conj(b)), 0.0, 1e-12);
    }
  }
}

TEST(SwitchingCf, NoSwitchingReducesToRegimeOne) {
  SwitchingModel m;
  m.family = SubordinatorFamily::InverseGaussian;
  m.s0 = 3.0;
  m.regimes = {RegimeParams{0.1, 0.3, 2.0, 2.0}, RegimeParams{-1.0, 2.0, 1.0, 0.5}};
  const CharFn cf(m, 1.7);
  for (double u : {-2.0, 0.7, 5.0}) {
    const Complex expected = std::exp(Complex(0.0, u * std::log(3.0)) + 1.7 * regime_char_exponent(m.regimes[0], m.family, Complex(u)));
    EXPECT_NEAR(std::abs(cf(Complex(u)) - expected), 0.0, 1e-12);
  }
}

TEST(SwitchingCf, RecenteringOnlyChangesPhase) {
  RandomStream rng(34);
  const SwitchingModel m = random_model(rng, SubordinatorFamily::Gamma);
  const CharFn cf(m, 1.0);
  const CharFn z = cf.recentered(0.0);
  EXPECT_NEAR(std::abs(cf(Complex(2.0)) - std::exp(Complex(0.0, 2.0 * std::log(m.s0))) * z(Complex(2.0))), 0.0, 1e-13);
  EXPECT_NEAR(std::abs(cf.log_return(Complex(2.0)) - z(Complex(2.0))), 0.0, 1e-15);
}

TEST(SwitchingCf, RejectsNonPositiveHorizon) {
  SwitchingModel m;
  EXPECT_THROW(CharFn(m, 0.0), std::invalid_argument);
}

TEST(RiskNeutralDrift, IdentityFamily) {
  EXPECT_DOUBLE_EQ(risk_neutral_drift({0.0, 0.5, 1.0, 1.0}, SubordinatorFamily::Identity, 0.04), 0.04 - 0.125);
}

TEST(RiskNeutralDrift, ZeroRateAndVanishingNoise) {
  EXPECT_NEAR(risk_neutral_drift({0.0, 1e-8, 2.0, 3.0}, SubordinatorFamily::Gamma, 0.0), 0.0, 1e-12);
}

TEST(RiskNeutralDrift, MatchesAnalyticCrossChecks) {
  const double r = 0.04;
  for (const RegimeParams& p : {RegimeParams{0, 0.03, 0.1, 1.0}, RegimeParams{0, 0.7, 0.1, 1.2}, RegimeParams{0, 0.3, 4, 2}}) {
    const double s2 = p.sigma * p.sigma;
    const double gamma = p.beta * (1.0 - std::exp(-r / p.alpha)) - 0.5 * s2;
    const double ig = 0.5 * (p.beta * p.beta - std::pow(p.beta - r / p.alpha, 2)) - 0.5 * s2;
    EXPECT_NEAR(risk_neutral_drift(p, SubordinatorFamily::Gamma, r), gamma, 1e-10);
    EXPECT_NEAR(risk_neutral_drift(p, SubordinatorFamily::InverseGaussian, r), ig, 1e-10);
  }
}

TEST(RiskNeutralDrift, MartingaleThroughTheCharacteristicFunction) {
  SwitchingModel m;
  m.family = SubordinatorFamily::Gamma;
  m.r = 0.04;
  m.s0 = 1.0;
  m.regimes = {RegimeParams{0.0, 0.03, 0.1, 1.0}, RegimeParams{0.0, 0.03, 0.1, 1.0}};
  m = with_risk_neutral_drift(m);
  EXPECT_NEAR(std::abs(regime_char_exponent(m.regimes[0], m.family, Complex(0.0, -1.0)) - m.r), 0.0, 1e-10);
  const CharFn cf(m, 1.0, 0.0);
  EXPECT_NEAR(std::abs(std::exp(-m.r) * cf(Complex(0.0, -1.0)) - 1.0), 0.0, 1e-8);
  m.lambda12 = 2.5;
  m.lambda21 = 1.0;
  m.regimes[1] = {0.0, 0.7, 0.1, 1.2};
  m = with_risk_neutral_drift(m);
  const CharFn sw(m, 2.0);
  EXPECT_NEAR(std::abs(sw(Complex(0.0, -1.0)) - m.s0 * std::exp(2.0 * m.r)), 0.0, 1e-6);
}

TEST(RiskNeutralDrift, IgWithoutExponentialMoment) {
  try {
    risk_neutral_drift({0.0, 0.2, 0.1, 0.3}, SubordinatorFamily::InverseGaussian, 0.04);
    FAIL();
  } catch (const std::domain_error& e) {
    EXPECT_NE(std::string(e.what()).find("beta"), std::string::npos);
  }
}

TEST(EsscherTilt, ZeroThetaIsIdentity) {
  const RegimeParams p{0.1, 0.4, 2.0, 3.0};
  const auto tilted = esscher_tilt(p, SubordinatorFamily::Gamma, 0.0);
  for (double u : {-1.0, 2.0}) EXPECT_EQ(tilted(Complex(u)), regime_char_exponent(p, SubordinatorFamily::Gamma, Complex(u)));
}

TEST(EsscherTilt, NormalizedAndGaussianShift) {
  const auto g = esscher_tilt({0.0, 1.0, 1.0, 1.0}, SubordinatorFamily::Identity, 1.0);
  EXPECT_NEAR(std::abs(g(Complex(0.0))), 0.0, 1e-15);
  for (double u : {-2.0, 0.5, 3.0}) EXPECT_NEAR(std::abs(g(Complex(u)) - Complex(-0.5 * u * u, u)), 0.0, 1e-14);
  const auto ig = esscher_tilt({0.1, 0.3, 2.0, 3.0}, SubordinatorFamily::InverseGaussian, 0.5);
  EXPECT_NEAR(std::abs(ig(Complex(0.0))), 0.0, 1e-15);
}

TEST(EsscherTilt, MissingMomentIsAnError) {
  EXPECT_THROW(esscher_tilt({0.0, 1.0, 1.0, 0.1}, SubordinatorFamily::Gamma, 5.0), std::domain_error);
}
