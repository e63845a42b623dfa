#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "rslevy/calibration.hpp"
#include "rslevy/charfn.hpp"

using namespace rslevy;

namespace {

SwitchingModel truth() {
  SwitchingModel m;
  m.family = SubordinatorFamily::Gamma;
  m.s0 = 100.0;
  m.r = 0.03;
  m.lambda12 = 2.0;
  m.lambda21 = 1.0;
  m.regimes = {RegimeParams{0.0, 0.25, 3.0, 3.0}, RegimeParams{0.0, 0.45, 2.0, 2.5}};
  return with_risk_neutral_drift(m);
}

CalibConfig fast_config() {
  CalibConfig cfg;
  cfg.mc_paths = 2000;
  cfg.cos.n_terms = 128;
  cfg.max_iters = 150;
  return cfg;
}

QuoteTable synthetic_quotes(const SwitchingModel& m, const CalibConfig& cfg) {
  QuoteTable grid;
  for (double t : {0.5, 1.0}) {
    for (double k : {90.0, 100.0, 110.0}) grid.add({t, k, OptionKind::Call, 0.0});
    grid.add({t, 85.0, OptionKind::Put, 0.0});
  }
  const auto prices = model_prices(m, grid, cfg);
  std::vector<Quote> rows = grid.rows();
  for (std::size_t i = 0; i < rows.size(); ++i) rows[i].mid = prices[i];
  return QuoteTable(rows);
}

}  // namespace

TEST(QuoteTable, Validation) {
  QuoteTable t;
  EXPECT_NO_THROW(t.add({1.0, 100.0, OptionKind::Call, 5.0}));
  EXPECT_NO_THROW(t.add({1.0, 100.0, OptionKind::Put, 5.0}));
  EXPECT_THROW(t.add({1.0, 100.0, OptionKind::Call, 6.0}), std::invalid_argument);
  EXPECT_THROW(t.add({0.0, 100.0, OptionKind::Call, 5.0}), std::invalid_argument);
  EXPECT_THROW(t.add({1.0, -100.0, OptionKind::Call, 5.0}), std::invalid_argument);
  EXPECT_THROW(t.add({1.0, 90.0, OptionKind::Call, -1.0}), std::invalid_argument);
  EXPECT_EQ(t.size(), 2u);
  EXPECT_DOUBLE_EQ(t.mean_quote(), 5.0);
}

TEST(OtmRule, Moneyness) {
  const OtmRule rule;
  EXPECT_TRUE(rule.is_otm({1, 106, OptionKind::Call, 0}, 100));
  EXPECT_FALSE(rule.is_otm({1, 104, OptionKind::Call, 0}, 100));
  EXPECT_TRUE(rule.is_otm({1, 94, OptionKind::Put, 0}, 100));
  EXPECT_FALSE(rule.is_otm({1, 106, OptionKind::Put, 0}, 100));
  OtmRule off;
  off.enabled = false;
  EXPECT_FALSE(off.is_otm({1, 200, OptionKind::Call, 0}, 100));
}

TEST(Objective, Arithmetic) {
  const QuoteTable q(std::vector<Quote>{{1.0, 100.0, OptionKind::Call, 12.0}});
  EXPECT_DOUBLE_EQ(pricing_rmse({10.0}, q), 2.0);
  EXPECT_THROW(pricing_rmse({}, QuoteTable{}), std::invalid_argument);
}

TEST(Objective, SelfQuotesGiveZero) {
  const CalibConfig cfg = fast_config();
  const QuoteTable q = synthetic_quotes(truth(), cfg);
  EXPECT_EQ(calib_objective(truth(), q, cfg), 0.0);
}

TEST(Objective, PermutationInvariant) {
  const CalibConfig cfg = fast_config();
  const QuoteTable q = synthetic_quotes(truth(), cfg);
  SwitchingModel other = truth();
  other.regimes[0].sigma = 0.3;
  other = with_risk_neutral_drift(other);
  std::vector<Quote> rows = q.rows();
  std::reverse(rows.begin(), rows.end());
  EXPECT_NEAR(calib_objective(other, QuoteTable(rows), cfg), calib_objective(other, q, cfg), 1e-12);
}

TEST(Objective, MonteCarloRowsUseFixedSeed) {
  CalibConfig cfg = fast_config();
  const QuoteTable q(std::vector<Quote>{{1.0, 120.0, OptionKind::Call, 1.0}});
  const double a = calib_objective(truth(), q, cfg);
  EXPECT_EQ(a, calib_objective(truth(), q, cfg));
  cfg.mc_seed = 2;
  EXPECT_NE(a, calib_objective(truth(), q, cfg));
}

TEST(Calibrate, FixedPoint) {
  const CalibConfig cfg = fast_config();
  const QuoteTable q = synthetic_quotes(truth(), cfg);
  const CalibReport rep = calibrate(q, truth(), ParamBounds{}, cfg);
  EXPECT_EQ(rep.initial_objective, 0.0);
  EXPECT_EQ(rep.objective, 0.0);
  EXPECT_LE(rep.iterations, 1);
}

TEST(Calibrate, RecoversPricesFromPerturbedStart) {
  const CalibConfig cfg = fast_config();
  const QuoteTable q = synthetic_quotes(truth(), cfg);
  SwitchingModel init = truth();
  init.regimes[0] = {0.0, 0.275, 2.7, 3.3};
  init.regimes[1] = {0.0, 0.405, 2.2, 2.25};
  const CalibReport rep = calibrate(q, init, ParamBounds{}, cfg);
  EXPECT_LT(rep.objective, 0.01 * q.mean_quote());
  EXPECT_LT(rep.objective, rep.initial_objective);
  for (std::size_t i = 1; i < rep.history.size(); ++i) EXPECT_LE(rep.history[i], rep.history[i - 1]);
  for (int j = 1; j <= 2; ++j) EXPECT_TRUE(ParamBounds{}.contains(rep.model.regime(j)));
  EXPECT_EQ(rep.model.lambda12, init.lambda12);
  EXPECT_EQ(rep.model.lambda21, init.lambda21);
  // Drifts stay risk neutral.
  for (int j = 1; j <= 2; ++j) {
    EXPECT_NEAR(regime_char_exponent(rep.model.regime(j), rep.model.family, Complex(0.0, -1.0)).real(), rep.model.r, 1e-10);
  }
  const CalibReport again = calibrate(q, init, ParamBounds{}, cfg);
  EXPECT_EQ(again.objective, rep.objective);
  EXPECT_EQ(again.model, rep.model);
}

TEST(Calibrate, DifferentStartsReachSimilarFits) {
  const CalibConfig cfg = fast_config();
  const QuoteTable q = synthetic_quotes(truth(), cfg);
  SwitchingModel a = truth(), b = truth();
  a.regimes[0] = {0.0, 0.275, 2.7, 3.3};
  b.regimes[0] = {0.0, 0.225, 3.3, 2.7};
  b.regimes[1] = {0.0, 0.5, 1.8, 2.75};
  const double ja = calibrate(q, a, ParamBounds{}, cfg).objective;
  const double jb = calibrate(q, b, ParamBounds{}, cfg).objective;
  const double scale = 0.01 * q.mean_quote();
  EXPECT_LT(ja, scale);
  EXPECT_LT(jb, scale);
}

TEST(Calibrate, FreeDriftMode) {
  CalibConfig cfg = fast_config();
  cfg.otm.enabled = false;
  cfg.drift = DriftMode::Free;
  cfg.max_iters = 60;
  const QuoteTable q = synthetic_quotes(truth(), cfg);
  SwitchingModel init = truth();
  init.regimes[1].sigma = 0.5;
  const CalibReport rep = calibrate(q, init, ParamBounds{}, cfg);
  EXPECT_LT(rep.objective, rep.initial_objective);
  EXPECT_LE(rep.iterations, 60);
}

TEST(Calibrate, Preconditions) {
  const CalibConfig cfg = fast_config();
  EXPECT_THROW(calibrate(QuoteTable{}, truth(), ParamBounds{}, cfg), std::invalid_argument);
  const QuoteTable q(std::vector<Quote>{{1.0, 100.0, OptionKind::Call, 10.0}});
  SwitchingModel bad = truth();
  bad.regimes[0].sigma = 7.0;
  EXPECT_THROW(calibrate(q, bad, ParamBounds{}, cfg), std::invalid_argument);
  CalibConfig neg = cfg;
  neg.step_tolerance = 0.0;
  EXPECT_THROW(calibrate(q, truth(), ParamBounds{}, neg), std::invalid_argument);
}
