#include <gtest/gtest.h>

#include <boost/math/distributions/inverse_gaussian.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <cmath>

#include "rslevy/random.hpp"
#include "rslevy/subordinator.hpp"

using namespace rslevy;

namespace {

struct Moments {
  double mean, var, se_mean, se_var;
};

template <typename Draw>
Moments sample_moments(int n, Draw&& draw) {
  std::vector<double> x(static_cast<std::size_t>(n));
  double s = 0.0;
  for (auto& v : x) s += (v = draw());
  const double mean = s / n;
  double m2 = 0.0, m4 = 0.0;
  for (double v : x) {
    const double d = (v - mean) * (v - mean);
    m2 += d;
    m4 += d * d;
  }
  m2 /= n;
  m4 /= n;
  return {mean, m2, std::sqrt(m2 / n), std::sqrt((m4 - m2 * m2) / n)};
}

const SubordinatorSpec kGamma{SubordinatorFamily::Gamma, 0.1, 0.1};
const SubordinatorSpec kIg{SubordinatorFamily::InverseGaussian, 0.1, 0.1};

}  // namespace

TEST(Subordinator, ExponentVanishesAtZero) {
  for (auto f : {SubordinatorFamily::Gamma, SubordinatorFamily::InverseGaussian, SubordinatorFamily::Identity}) {
    EXPECT_EQ(laplace_exponent({f, 2.0, 3.0}, Complex(0.0)), Complex(0.0));
  }
}

TEST(Subordinator, ClosedForms) {
  const Complex s(-0.3, 0.7);
  EXPECT_NEAR(std::abs(laplace_exponent({SubordinatorFamily::Gamma, 2.0, 3.0}, s) + 2.0 * std::log(1.0 - s / 3.0)), 0.0,
              1e-15);
  EXPECT_NEAR(
      std::abs(laplace_exponent({SubordinatorFamily::InverseGaussian, 2.0, 3.0}, s) + 2.0 * (std::sqrt(9.0 - 2.0 * s) - 3.0)),
      0.0, 1e-15);
  EXPECT_EQ(laplace_exponent({SubordinatorFamily::Identity, 2.0, 3.0}, s), s);
}

TEST(Subordinator, BranchCutIsReported) {
  EXPECT_THROW(laplace_exponent({SubordinatorFamily::Gamma, 1.0, 1.0}, Complex(1.5)), BranchCutError);
  EXPECT_THROW(laplace_exponent({SubordinatorFamily::InverseGaussian, 1.0, 1.0}, Complex(0.6)), BranchCutError);
  try {
    laplace_exponent({SubordinatorFamily::Gamma, 1.0, 1.0}, Complex(2.0));
    FAIL();
  } catch (const BranchCutError& e) {
    EXPECT_NE(std::string(e.what()).find('2'), std::string::npos);
  }
}

TEST(Subordinator, GammaLaplaceTransformMatchesSimulation) {
  RandomStream rng(11);
  const double s = -0.5;
  const Moments m = sample_moments(1000000, [&] { return std::exp(s * sample_increment(kGamma, 1.0, rng)); });
  const double exact = std::exp(laplace_exponent(kGamma, Complex(s)).real());
  EXPECT_LT(std::abs(m.mean - exact), 3 * m.se_mean);
}

TEST(Subordinator, IgMeanFromDerivative) {
  const SubordinatorSpec ig{SubordinatorFamily::InverseGaussian, 0.1, 10.0};
  const double h = 1e-5;
  const double d = (laplace_exponent(ig, Complex(h)) - laplace_exponent(ig, Complex(-h))).real() / (2 * h);
  EXPECT_NEAR(d, 0.01, 1e-6);
}

TEST(Subordinator, CumulantsMatchDerivatives) {
  for (const SubordinatorSpec& spec : {SubordinatorSpec{SubordinatorFamily::Gamma, 2.0, 3.0},
                                       SubordinatorSpec{SubordinatorFamily::InverseGaussian, 2.0, 3.0}}) {
    const double h = 1e-3;
    const auto l = [&](double s) { return laplace_exponent(spec, Complex(s)).real(); };
    EXPECT_NEAR(subordinator_cumulant(spec, 1), (l(h) - l(-h)) / (2 * h), 1e-6);
    EXPECT_NEAR(subordinator_cumulant(spec, 2), (l(h) - 2 * l(0) + l(-h)) / (h * h), 1e-5);
  }
  EXPECT_DOUBLE_EQ(subordinator_cumulant({SubordinatorFamily::Gamma, 2.0, 4.0}, 3), 2.0 * 2.0 / 64.0);
  EXPECT_DOUBLE_EQ(subordinator_cumulant({SubordinatorFamily::InverseGaussian, 2.0, 2.0}, 3), 2.0 * 3.0 / 32.0);
  EXPECT_DOUBLE_EQ(subordinator_cumulant({SubordinatorFamily::Identity, 2.0, 2.0}, 1), 1.0);
  EXPECT_DOUBLE_EQ(subordinator_cumulant({SubordinatorFamily::Identity, 2.0, 2.0}, 2), 0.0);
}

TEST(Subordinator, IdentityIncrementIsDeterministic) {
  RandomStream rng(1);
  EXPECT_EQ(sample_increment({SubordinatorFamily::Identity, 1.0, 1.0}, 0.5, rng), 0.5);
}

TEST(Subordinator, GammaSampleMean) {
  RandomStream rng(12);
  const Moments m = sample_moments(1000000, [&] { return sample_increment(kGamma, 1.0, rng); });
  EXPECT_LT(std::abs(m.mean - 1.0), 3 * m.se_mean);
  EXPECT_LT(std::abs(m.var - 10.0), 3 * m.se_var);
}

TEST(Subordinator, IgSampleVariance) {
  RandomStream rng(13);
  const Moments m = sample_moments(1000000, [&] { return sample_increment(kIg, 1.0, rng); });
  EXPECT_LT(std::abs(m.mean - 1.0), 3 * m.se_mean);
  EXPECT_LT(std::abs(m.var - 100.0), 3 * m.se_var);
}

TEST(Subordinator, DailyIncrementCumulants) {
  for (const SubordinatorSpec& spec : {SubordinatorSpec{SubordinatorFamily::Gamma, 3.0, 2.0},
                                       SubordinatorSpec{SubordinatorFamily::InverseGaussian, 3.0, 2.0}}) {
    RandomStream rng(14);
    const double dt = 1.0 / 250.0;
    bool positive = true;
    const Moments m = sample_moments(1000000, [&] {
      const double x = sample_increment(spec, dt, rng);
      positive = positive && x >= 0.0;
      return x;
    });
    EXPECT_TRUE(positive);
    EXPECT_LT(std::abs(m.mean - subordinator_cumulant(spec, 1) * dt), 3 * m.se_mean) << to_string(spec.family);
    EXPECT_LT(std::abs(m.var - subordinator_cumulant(spec, 2) * dt), 3 * m.se_var) << to_string(spec.family);
  }
}

TEST(Subordinator, IgSamplesArePositive) {
  RandomStream rng(15);
  for (int i = 0; i < 100000; ++i) ASSERT_GT(sample_increment(kIg, 1e-3, rng), 0.0);
}

TEST(Subordinator, IgVarianceExceedsGammaBelowUnitRate) {
  for (double beta : {0.1, 0.5, 0.9, 1.5, 4.0}) {
    const double vg = subordinator_cumulant({SubordinatorFamily::Gamma, 1.0, beta}, 2);
    const double vi = subordinator_cumulant({SubordinatorFamily::InverseGaussian, 1.0, beta}, 2);
    EXPECT_EQ(vi > vg, beta < 1.0) << beta;
  }
}

TEST(IncrementQuantile, GammaMatchesRegularizedGamma) {
  const SubordinatorSpec spec{SubordinatorFamily::Gamma, 3.0, 2.0};
  for (double u : {1e-9, 0.01, 0.3, 0.5, 0.7, 0.99, 1.0 - 1e-9}) {
    const double q = increment_quantile(spec, 0.5, u);
    const double p = u <= 0.5 ? boost::math::gamma_p(1.5, 2.0 * q) : boost::math::gamma_q(1.5, 2.0 * q);
    EXPECT_NEAR(p, u <= 0.5 ? u : 1.0 - u, 1e-12 * std::min(u, 1.0 - u)) << u;
  }
}

TEST(IncrementQuantile, InverseGaussianMatchesClosedFormCdf) {
  for (const SubordinatorSpec spec : {SubordinatorSpec{SubordinatorFamily::InverseGaussian, 20.0, 20.0},
                                      SubordinatorSpec{SubordinatorFamily::InverseGaussian, 2.0, 0.5}}) {
    const double dt = 0.04;
    const double scale = spec.alpha * dt;
    const boost::math::inverse_gaussian_distribution<double> law(scale / spec.beta, scale * scale);
    for (double u : {1e-9, 0.01, 0.3, 0.5, 0.7, 0.99, 1.0 - 1e-9}) {
      const double q = increment_quantile(spec, dt, u);
      const double p = u <= 0.5 ? cdf(law, q) : cdf(complement(law, q));
      EXPECT_NEAR(p, u <= 0.5 ? u : 1.0 - u, 1e-10 * std::min(u, 1.0 - u)) << spec.alpha << ' ' << u;
    }
  }
}

TEST(IncrementQuantile, InverseTransformMoments) {
  // kIg at dt = 1 is strongly skewed: alpha * beta * dt = 0.01.
  for (const SubordinatorSpec spec : {kGamma, kIg, SubordinatorSpec{SubordinatorFamily::InverseGaussian, 2.0, 0.5}}) {
    const double dt = 1.0;
    RandomStream rng(16);
    const Moments m = sample_moments(400000, [&] { return increment_quantile(spec, dt, rng.uniform()); });
    EXPECT_LT(std::abs(m.mean - subordinator_cumulant(spec, 1) * dt), 3 * m.se_mean) << to_string(spec.family);
  }
}

TEST(IncrementQuantile, SmoothInParameters) {
  for (auto fam : {SubordinatorFamily::Gamma, SubordinatorFamily::InverseGaussian}) {
    for (double u : {0.05, 0.5, 0.95}) {
      const SubordinatorSpec a{fam, 20.0, 20.0}, b{fam, 20.0 * (1.0 + 1e-7), 20.0};
      const double qa = increment_quantile(a, 1.0 / 250, u), qb = increment_quantile(b, 1.0 / 250, u);
      EXPECT_GT(qb, qa) << to_string(fam) << u;
      EXPECT_LT((qb - qa) / qa, 1e-5) << to_string(fam) << u;
    }
  }
}

TEST(IncrementQuantile, EdgeCases) {
  EXPECT_EQ(increment_quantile({SubordinatorFamily::Identity, 1.0, 1.0}, 0.25, 0.3), 0.25);
  EXPECT_THROW(increment_quantile(kGamma, 1.0, 0.0), std::invalid_argument);
  EXPECT_THROW(increment_quantile(kGamma, 1.0, 1.0), std::invalid_argument);
  EXPECT_THROW(increment_quantile(kGamma, 0.0, 0.5), std::invalid_argument);
}
