#pragma once

#include <array>
#include <string>
#include <string_view>
#include <vector>

#include "rslevy/random.hpp"

namespace rslevy {

/// One trading day in years.
inline constexpr double kTradingDay = 1.0 / 250.0;

enum class SubordinatorFamily { Gamma, InverseGaussian, Identity };

std::string_view to_string(SubordinatorFamily family);
/// Accepts "gamma", "ig"/"inverse_gaussian", "identity" (case-insensitive).
SubordinatorFamily parse_family(std::string_view text);

/// Per-regime parameters of Y = mu * L + sigma * B(L).
struct RegimeParams {
  double mu = 0.0;
  double sigma = 1.0;  ///< diffusion coefficient per sqrt(year), > 0
  double alpha = 1.0;  ///< subordinator shape, > 0
  double beta = 1.0;   ///< subordinator rate, > 0

  /// Throws std::invalid_argument unless sigma, alpha, beta are positive and finite.
  void validate() const;

  friend bool operator==(const RegimeParams&, const RegimeParams&) = default;
};

/// Two-regime switching time-changed Levy model plus market data.
///
/// The chain always starts in regime 1. `lambda12` and `lambda21` are
/// switching intensities (events per year); a zero intensity makes the regime
/// absorbing. The mean sojourn ("holding rate") in regime j is 1 / lambda_jk.
struct SwitchingModel {
  std::array<RegimeParams, 2> regimes{};
  double lambda12 = 0.0;
  double lambda21 = 0.0;
  SubordinatorFamily family = SubordinatorFamily::Gamma;
  double s0 = 1.0;
  double r = 0.0;

  void validate() const;

  const RegimeParams& regime(int state) const { return regimes.at(static_cast<std::size_t>(state - 1)); }
  /// Intensity of leaving `state` (1 or 2).
  double exit_intensity(int state) const { return state == 1 ? lambda12 : lambda21; }

  friend bool operator==(const SwitchingModel&, const SwitchingModel&) = default;
};

/// Mean sojourn duration for a switching intensity (infinite when intensity is 0).
double mean_sojourn(double intensity);
/// Switching intensity for a mean sojourn duration.
double intensity_from_sojourn(double mean_sojourn_years);

using Matrix2 = std::array<std::array<double, 2>, 2>;

/// Generator [[-l12, l12], [l21, -l21]].
Matrix2 generator_matrix(const SwitchingModel& model);

/// Piecewise-constant regime trajectory on [0, horizon].
///
/// `states[k]` is active on [switch_times[k-1], switch_times[k]) with
/// switch_times[-1] = 0; states alternate and start at 1.
struct RegimePath {
  std::vector<double> switch_times;
  std::vector<int> states{1};
  double horizon = 0.0;

  int state_at(double t) const;
  std::size_t switch_count() const { return switch_times.size(); }
};

RegimePath simulate_regime_path(const SwitchingModel& model, double horizon, RandomStream& rng);

/// Fraction of [0, horizon] spent in regime 1.
double occupation_fraction(const RegimePath& path, double horizon);

}  // namespace rslevy
