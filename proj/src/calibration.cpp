#include "rslevy/calibration.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <sstream>
#include <stdexcept>

#include "rslevy/charfn.hpp"
#include "rslevy/mc_engine.hpp"
#include "rslevy/optimize.hpp"
#include "rslevy/parallel.hpp"

namespace rslevy {

QuoteTable::QuoteTable(std::vector<Quote> rows) {
  for (const auto& q : rows) add(q);
}

void QuoteTable::add(const Quote& q) {
  if (!(q.maturity > 0.0) || !std::isfinite(q.maturity)) throw std::invalid_argument("quote maturity must be > 0");
  if (!(q.strike > 0.0) || !std::isfinite(q.strike)) throw std::invalid_argument("quote strike must be > 0");
  if (!(q.mid >= 0.0) || !std::isfinite(q.mid)) throw std::invalid_argument("quote price must be >= 0");
  for (const auto& r : rows_) {
    if (r.maturity == q.maturity && r.strike == q.strike && r.kind == q.kind) {
      std::ostringstream msg;
      msg << "duplicate quote (T=" << q.maturity << ", K=" << q.strike << ", " << to_string(q.kind) << ")";
      throw std::invalid_argument(msg.str());
    }
  }
  rows_.push_back(q);
}

double QuoteTable::mean_quote() const {
  if (rows_.empty()) throw std::invalid_argument("empty quote table");
  double s = 0.0;
  for (const auto& q : rows_) s += q.mid;
  return s / static_cast<double>(rows_.size());
}

bool OtmRule::is_otm(const Quote& q, double s0) const {
  if (!enabled) return false;
  const double m = q.strike / s0;
  return q.kind == OptionKind::Call ? m > call_moneyness : m < put_moneyness;
}

void CalibConfig::validate() const {
  if (!(step_tolerance > 0.0)) throw std::invalid_argument("step_tolerance must be > 0");
  if (max_iters < 1) throw std::invalid_argument("max_iters must be >= 1");
  if (!(fd_step > 0.0)) throw std::invalid_argument("fd_step must be > 0");
  if (!(mc_dt >= 0.0)) throw std::invalid_argument("mc_dt must be >= 0");
  if (otm.enabled && mc_paths < 100) throw std::invalid_argument("mc_paths must be >= 100");
  cos.validate();
}

namespace {

std::string describe(std::size_t row, const Quote& q) {
  std::ostringstream s;
  s << "quote row " << row + 1 << " (T=" << q.maturity << ", K=" << q.strike << ", " << to_string(q.kind) << ")";
  return s.str();
}

}  // namespace

std::vector<double> model_prices(const SwitchingModel& model, const QuoteTable& quotes, const CalibConfig& config) {
  if (quotes.empty()) throw std::invalid_argument("calibration needs at least one quote");
  model.validate();
  const auto& rows = quotes.rows();
  std::map<double, std::vector<std::size_t>> by_maturity;
  for (std::size_t i = 0; i < rows.size(); ++i) by_maturity[rows[i].maturity].push_back(i);
  std::vector<std::pair<double, std::vector<std::size_t>>> slices(by_maturity.begin(), by_maturity.end());

  std::vector<double> prices(rows.size(), 0.0);
  McConfig mc;
  mc.n_paths = config.mc_paths;
  mc.dt = config.mc_dt;
  mc.seed = config.mc_seed;
  mc.threads = 1;

  parallel_for(slices.size(), config.threads, [&](std::size_t s) {
    const auto& [maturity, idx] = slices[s];
    std::vector<std::size_t> cos_rows, mc_rows;
    for (std::size_t i : idx) (config.otm.is_otm(rows[i], model.s0) ? mc_rows : cos_rows).push_back(i);
    if (!cos_rows.empty()) {
      const CosSlice slice(model, maturity, config.cos);
      for (std::size_t i : cos_rows) {
        try {
          prices[i] = slice.price(rows[i].strike, rows[i].kind);
        } catch (const std::exception& e) {
          throw PricingError(describe(i, rows[i]) + ": " + e.what());
        }
      }
    }
    if (!mc_rows.empty()) {
      std::vector<ContractSpec> contracts;
      for (std::size_t i : mc_rows) contracts.push_back(rows[i].contract());
      std::vector<McResult> res;
      try {
        res = price_european_mc(model, maturity, contracts, mc);
      } catch (const std::exception& e) {
        throw PricingError(describe(mc_rows.front(), rows[mc_rows.front()]) + ": " + e.what());
      }
      for (std::size_t j = 0; j < mc_rows.size(); ++j) prices[mc_rows[j]] = res[j].price;
    }
  });
  for (std::size_t i = 0; i < prices.size(); ++i) {
    if (!std::isfinite(prices[i])) throw PricingError(describe(i, rows[i]) + ": non-finite model price");
  }
  return prices;
}

double pricing_rmse(const std::vector<double>& prices, const QuoteTable& quotes) {
  if (quotes.empty()) throw std::invalid_argument("calibration needs at least one quote");
  if (prices.size() != quotes.size()) throw std::invalid_argument("price and quote counts differ");
  double s = 0.0;
  for (std::size_t i = 0; i < prices.size(); ++i) {
    const double d = prices[i] - quotes.rows()[i].mid;
    s += d * d;
  }
  return std::sqrt(s / static_cast<double>(prices.size()));
}

double calib_objective(const SwitchingModel& model, const QuoteTable& quotes, const CalibConfig& config) {
  return pricing_rmse(model_prices(model, quotes, config), quotes);
}

namespace {

// Free coordinates per regime: (sigma, alpha, beta) or (mu, sigma, alpha, beta),
// each divided by its starting magnitude.
class Packing {
 public:
  Packing(const SwitchingModel& init, DriftMode mode, const ParamBounds& bounds)
      : base_(init), mode_(mode), bounds_(bounds) {
    for (int j = 0; j < 2; ++j) {
      const auto p = to_array(init.regimes[static_cast<std::size_t>(j)]);
      for (std::size_t c = first(); c < 4; ++c) scale_.push_back(std::max(std::abs(p[c]), c == 0 ? 1e-2 : 1e-6));
    }
  }

  std::size_t first() const { return mode_ == DriftMode::RiskNeutral ? 1 : 0; }

  std::vector<double> pack(const SwitchingModel& m) const {
    std::vector<double> z;
    std::size_t k = 0;
    for (int j = 0; j < 2; ++j) {
      const auto p = to_array(m.regimes[static_cast<std::size_t>(j)]);
      for (std::size_t c = first(); c < 4; ++c, ++k) z.push_back(p[c] / scale_[k]);
    }
    return z;
  }

  SwitchingModel unpack(std::span<const double> z) const {
    SwitchingModel m = base_;
    std::size_t k = 0;
    for (int j = 0; j < 2; ++j) {
      auto p = to_array(m.regimes[static_cast<std::size_t>(j)]);
      for (std::size_t c = first(); c < 4; ++c, ++k) p[c] = z[k] * scale_[k];
      m.regimes[static_cast<std::size_t>(j)] = from_array(p);
    }
    return mode_ == DriftMode::RiskNeutral ? with_risk_neutral_drift(m) : m;
  }

  Box box() const {
    Box b;
    const auto lo = to_array(bounds_.lower), hi = to_array(bounds_.upper);
    std::size_t k = 0;
    for (int j = 0; j < 2; ++j) {
      for (std::size_t c = first(); c < 4; ++c, ++k) {
        b.lower.push_back(lo[c] / scale_[k]);
        b.upper.push_back(hi[c] / scale_[k]);
      }
    }
    return b;
  }

 private:
  SwitchingModel base_;
  DriftMode mode_;
  ParamBounds bounds_;
  std::vector<double> scale_;
};

}  // namespace

CalibReport calibrate(const QuoteTable& quotes, const SwitchingModel& init, const ParamBounds& bounds,
                      const CalibConfig& config) {
  config.validate();
  init.validate();
  if (quotes.empty()) throw std::invalid_argument("calibration needs at least one quote");
  for (int j = 1; j <= 2; ++j) {
    RegimeParams p = init.regime(j);
    if (config.drift == DriftMode::RiskNeutral) p.mu = bounds.clamp(p).mu;
    if (!bounds.contains(p)) throw std::invalid_argument("initial regime " + std::to_string(j) + " lies outside bounds");
  }
  const Packing packing(init, config.drift, bounds);
  const SwitchingModel start = packing.unpack(packing.pack(init));
  CalibReport report;
  report.initial_objective = calib_objective(start, quotes, config);

  const Objective f = [&](std::span<const double> z) {
    try {
      return calib_objective(packing.unpack(z), quotes, config);
    } catch (const std::exception&) {
      return std::numeric_limits<double>::infinity();
    }
  };
  GradientDescentOptions opts;
  opts.step_tolerance = config.step_tolerance;
  opts.max_iters = config.max_iters;
  opts.fd_step = config.fd_step;
  const OptimResult r = projected_gradient_descent(f, packing.pack(init), packing.box(), opts);

  report.model = packing.unpack(r.x);
  report.iterations = r.iterations;
  report.objective = r.value;
  report.stop_reason = r.stop_reason;
  report.history = r.history;
  return report;
}

}  // namespace rslevy
