#include "rslevy/regime_model.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace rslevy {

namespace {

std::string lower(std::string_view text) {
  std::string out(text);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

bool positive_finite(double x) { return std::isfinite(x) && x > 0.0; }

}  // namespace

std::string_view to_string(SubordinatorFamily family) {
  switch (family) {
    case SubordinatorFamily::Gamma:
      return "gamma";
    case SubordinatorFamily::InverseGaussian:
      return "ig";
    case SubordinatorFamily::Identity:
      return "identity";
  }
  return "unknown";
}

SubordinatorFamily parse_family(std::string_view text) {
  const std::string key = lower(text);
  if (key == "gamma") return SubordinatorFamily::Gamma;
  if (key == "ig" || key == "inverse_gaussian" || key == "inversegaussian") return SubordinatorFamily::InverseGaussian;
  if (key == "identity" || key == "bs") return SubordinatorFamily::Identity;
  throw std::invalid_argument("unknown subordinator family '" + std::string(text) + "'");
}

void RegimeParams::validate() const {
  if (!std::isfinite(mu)) throw std::invalid_argument("regime mu must be finite");
  if (!positive_finite(sigma)) throw std::invalid_argument("regime sigma must be > 0");
  if (!positive_finite(alpha)) throw std::invalid_argument("regime alpha must be > 0");
  if (!positive_finite(beta)) throw std::invalid_argument("regime beta must be > 0");
}

void SwitchingModel::validate() const {
  for (const auto& p : regimes) p.validate();
  if (!(std::isfinite(lambda12) && lambda12 >= 0.0)) throw std::invalid_argument("lambda12 must be >= 0");
  if (!(std::isfinite(lambda21) && lambda21 >= 0.0)) throw std::invalid_argument("lambda21 must be >= 0");
  if (!positive_finite(s0)) throw std::invalid_argument("s0 must be > 0");
  if (!std::isfinite(r)) throw std::invalid_argument("r must be finite");
}

double mean_sojourn(double intensity) {
  if (intensity < 0.0) throw std::invalid_argument("intensity must be >= 0");
  return intensity == 0.0 ? std::numeric_limits<double>::infinity() : 1.0 / intensity;
}

double intensity_from_sojourn(double mean_sojourn_years) {
  if (!(mean_sojourn_years > 0.0)) throw std::invalid_argument("mean sojourn must be > 0");
  return std::isinf(mean_sojourn_years) ? 0.0 : 1.0 / mean_sojourn_years;
}

Matrix2 generator_matrix(const SwitchingModel& model) {
  return {{{-model.lambda12, model.lambda12}, {model.lambda21, -model.lambda21}}};
}

int RegimePath::state_at(double t) const {
  const auto it = std::upper_bound(switch_times.begin(), switch_times.end(), t);
  return states[static_cast<std::size_t>(it - switch_times.begin())];
}

RegimePath simulate_regime_path(const SwitchingModel& model, double horizon, RandomStream& rng) {
  if (!(horizon > 0.0)) throw std::invalid_argument("horizon must be > 0");
  RegimePath path;
  path.horizon = horizon;
  double t = 0.0;
  int state = 1;
  for (;;) {
    const double rate = model.exit_intensity(state);
    if (rate == 0.0) break;
    t += rng.exponential(rate);
    if (t >= horizon) break;
    state = 3 - state;
    path.switch_times.push_back(t);
    path.states.push_back(state);
  }
  return path;
}

double occupation_fraction(const RegimePath& path, double horizon) {
  if (!(horizon > 0.0)) throw std::invalid_argument("horizon must be > 0");
  double in_one = 0.0;
  double start = 0.0;
  for (std::size_t k = 0; k < path.states.size(); ++k) {
    const double end = k < path.switch_times.size() ? std::min(path.switch_times[k], horizon) : horizon;
    if (path.states[k] == 1 && end > start) in_one += end - start;
    start = end;
    if (start >= horizon) break;
  }
  return in_one / horizon;
}

}  // namespace rslevy
