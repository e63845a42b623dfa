#include "rslevy/mc_engine.hpp"

#include <cmath>
#include <stdexcept>

#include "rslevy/parallel.hpp"
#include "rslevy/subordinator.hpp"

namespace rslevy {

namespace {

void check_grid(double horizon, double dt) {
  if (!(horizon > 0.0)) throw std::invalid_argument("simulation horizon must be > 0");
  if (!(dt >= 0.0) || dt > horizon) throw std::invalid_argument("simulation step must satisfy 0 < dt <= horizon");
}

// Walks the grid {k * step} refined with the switch times, calling
// on_step(t_end, dz, state) after each increment.
template <typename OnStep>
void walk(const SwitchingModel& model, double horizon, double dt, RandomStream& rng, OnStep&& on_step) {
  const RegimePath regimes = simulate_regime_path(model, horizon, rng);
  const double step = dt > 0.0 ? dt : horizon;
  double t = 0.0;
  std::size_t k = 1;
  for (std::size_t seg = 0; seg < regimes.states.size(); ++seg) {
    const int state = regimes.states[seg];
    const double seg_end = seg < regimes.switch_times.size() ? regimes.switch_times[seg] : horizon;
    const RegimeParams& p = model.regime(state);
    const SubordinatorSpec spec = SubordinatorSpec::of(p, model.family);
    while (t < seg_end) {
      double grid_t = static_cast<double>(k) * step;
      if (grid_t > horizon || horizon - grid_t <= 1e-12 * horizon) grid_t = horizon;
      double t_end = seg_end;
      if (grid_t <= seg_end) {
        t_end = grid_t;
        ++k;
      }
      const double h = t_end - t;
      if (h > 0.0) {
        const double dl = sample_increment(spec, h, rng);
        on_step(t_end, p.mu * dl + p.sigma * std::sqrt(dl) * rng.normal(), state);
      }
      t = t_end;
    }
  }
}

}  // namespace

PricePath simulate_path(const SwitchingModel& model, double horizon, double dt, RandomStream& rng) {
  check_grid(horizon, dt);
  PricePath path;
  path.times.push_back(0.0);
  path.log_prices.push_back(0.0);
  path.regimes.push_back(1);
  double z = 0.0;
  walk(model, horizon, dt, rng, [&](double t, double dz, int state) {
    z += dz;
    path.times.push_back(t);
    path.log_prices.push_back(z);
    path.regimes.push_back(state);
  });
  return path;
}

double simulate_terminal(const SwitchingModel& model, double horizon, double dt, RandomStream& rng) {
  check_grid(horizon, dt);
  double z = 0.0;
  walk(model, horizon, dt, rng, [&](double, double dz, int) { z += dz; });
  return z;
}

std::vector<double> simulate_terminals(const SwitchingModel& model, double horizon, const McConfig& config) {
  model.validate();
  check_grid(horizon, config.dt);
  std::vector<double> out(config.n_paths);
  parallel_for(config.n_paths, config.threads, [&](std::size_t i) {
    RandomStream rng(config.seed, i);
    out[i] = simulate_terminal(model, horizon, config.dt, rng);
  });
  return out;
}

McResult summarize_payoffs(const std::vector<double>& discounted_payoffs, std::uint64_t seed) {
  const std::size_t m = discounted_payoffs.size();
  if (m < 2) throw std::invalid_argument("need at least two payoffs");
  double mean = 0.0;
  for (double x : discounted_payoffs) mean += x;
  mean /= static_cast<double>(m);
  double ss = 0.0;
  for (double x : discounted_payoffs) ss += (x - mean) * (x - mean);
  const double s = std::sqrt(ss / static_cast<double>(m - 1));
  McResult res;
  res.price = mean;
  res.std_error = s / std::sqrt(static_cast<double>(m));
  res.ci_lo = mean - kZ95 * res.std_error;
  res.ci_hi = mean + kZ95 * res.std_error;
  res.n_paths = m;
  res.seed = seed;
  return res;
}

std::vector<McResult> price_european_mc(const SwitchingModel& model, double maturity,
                                        const std::vector<ContractSpec>& contracts, const McConfig& config) {
  if (config.n_paths < 100) throw std::invalid_argument("Monte Carlo pricing needs at least 100 paths");
  for (const auto& c : contracts) {
    c.validate();
    if (std::abs(c.maturity - maturity) > 1e-12 * std::max(1.0, maturity)) {
      throw std::invalid_argument("all contracts must share the simulated maturity");
    }
  }
  const std::vector<double> z = simulate_terminals(model, maturity, config);
  const double discount = std::exp(-model.r * maturity);
  std::vector<McResult> out;
  out.reserve(contracts.size());
  std::vector<double> payoffs(z.size());
  for (const auto& c : contracts) {
    for (std::size_t i = 0; i < z.size(); ++i) payoffs[i] = discount * payoff(c, model.s0 * std::exp(z[i]));
    out.push_back(summarize_payoffs(payoffs, config.seed));
  }
  return out;
}

McResult price_european_mc(const SwitchingModel& model, const ContractSpec& contract, const McConfig& config) {
  return price_european_mc(model, contract.maturity, std::vector<ContractSpec>{contract}, config).front();
}

}  // namespace rslevy
