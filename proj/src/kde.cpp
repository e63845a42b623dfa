#include "rslevy/kde.hpp"

#include <algorithm>
#include <cmath>
#include <iterator>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace rslevy {

namespace {

constexpr double kCutoff = 9.0;

double sample_sd(std::span<const double> x) {
  double mean = 0.0;
  for (double v : x) mean += v;
  mean /= static_cast<double>(x.size());
  double ss = 0.0;
  for (double v : x) ss += (v - mean) * (v - mean);
  return std::sqrt(ss / static_cast<double>(x.size() - 1));
}

}  // namespace

double silverman_bandwidth(std::span<const double> samples) {
  if (samples.size() < 2) throw std::invalid_argument("kde: need at least two samples");
  const double sd = sample_sd(samples);
  if (!(sd > 0.0) || !std::isfinite(sd)) throw std::invalid_argument("kde: degenerate sample (zero spread)");
  return 1.06 * sd * std::pow(static_cast<double>(samples.size()), -0.2);
}

Kde::Kde(std::span<const double> samples) : Kde(samples, silverman_bandwidth(samples)) {}

Kde::Kde(std::span<const double> samples, double bandwidth) : sorted_(samples.begin(), samples.end()), h_(bandwidth) {
  if (sorted_.size() < 2) throw std::invalid_argument("kde: need at least two samples");
  if (!(h_ > 0.0) || !std::isfinite(h_)) throw std::invalid_argument("kde: bandwidth must be > 0");
  std::sort(sorted_.begin(), sorted_.end());
}

double Kde::operator()(double x) const {
  const auto lo = std::lower_bound(sorted_.begin(), sorted_.end(), x - kCutoff * h_);
  const auto hi = std::upper_bound(lo, sorted_.end(), x + kCutoff * h_);
  double sum = 0.0;
  for (auto it = lo; it != hi; ++it) {
    const double z = (x - *it) / h_;
    sum += std::exp(-0.5 * z * z);
  }
  return sum / (static_cast<double>(sorted_.size()) * h_ * std::sqrt(2.0 * std::numbers::pi));
}

std::vector<double> Kde::evaluate_binned(std::span<const double> queries, std::size_t grid_size) const {
  std::vector<double> out(queries.size(), 0.0);
  if (queries.empty()) return out;
  if (grid_size < 2) throw std::invalid_argument("kde: grid needs at least two nodes");
  // The grid covers the queries that lie within the cutoff of some sample;
  // the rest are zero.
  const auto [qmin_it, qmax_it] = std::minmax_element(queries.begin(), queries.end());
  const double lo = std::max(*qmin_it, sorted_.front()) - kCutoff * h_;
  const double hi = std::min(*qmax_it, sorted_.back()) + kCutoff * h_;
  if (!(lo < hi)) return out;
  const double step = (hi - lo) / static_cast<double>(grid_size - 1);

  // Linear binning; samples outside [lo, hi] are beyond the kernel cutoff of every query.
  std::vector<double> counts(grid_size, 0.0);
  for (double s : sorted_) {
    if (s < lo || s > hi) continue;
    const double pos = (s - lo) / step;
    auto i = static_cast<std::size_t>(pos);
    if (i >= grid_size - 1) i = grid_size - 2;
    const double frac = pos - static_cast<double>(i);
    counts[i] += 1.0 - frac;
    counts[i + 1] += frac;
  }

  const auto reach = static_cast<std::size_t>(std::ceil(kCutoff * h_ / step));
  std::vector<double> kernel(reach + 1);
  for (std::size_t j = 0; j <= reach; ++j) {
    const double z = static_cast<double>(j) * step / h_;
    kernel[j] = std::exp(-0.5 * z * z);
  }
  const double norm = 1.0 / (static_cast<double>(sorted_.size()) * h_ * std::sqrt(2.0 * std::numbers::pi));
  std::vector<double> density(grid_size, 0.0);
  for (std::size_t i = 0; i < grid_size; ++i) {
    if (counts[i] == 0.0) continue;
    const std::size_t j0 = i > reach ? i - reach : 0;
    const std::size_t j1 = std::min(grid_size - 1, i + reach);
    for (std::size_t j = j0; j <= j1; ++j) density[j] += counts[i] * kernel[j > i ? j - i : i - j];
  }
  for (double& d : density) d *= norm;

  for (std::size_t q = 0; q < queries.size(); ++q) {
    if (queries[q] < lo || queries[q] > hi) continue;
    const double pos = (queries[q] - lo) / step;
    auto i = static_cast<std::size_t>(pos);
    if (i >= grid_size - 1) i = grid_size - 2;
    const double frac = pos - static_cast<double>(i);
    out[q] = (1.0 - frac) * density[i] + frac * density[i + 1];
  }
  return out;
}

double Kde::log_density(double x) const {
  // Walk outwards from x until the remaining kernels are negligible against the largest.
  const auto mid = std::lower_bound(sorted_.begin(), sorted_.end(), x);
  double d_min = std::numeric_limits<double>::infinity();
  if (mid != sorted_.end()) d_min = *mid - x;
  if (mid != sorted_.begin()) d_min = std::min(d_min, x - *std::prev(mid));
  const double top = -0.5 * (d_min / h_) * (d_min / h_);
  constexpr double kNegligible = 40.0;
  double sum = 0.0;
  for (auto it = mid; it != sorted_.end(); ++it) {
    const double z = (*it - x) / h_;
    const double e = -0.5 * z * z - top;
    if (e < -kNegligible) break;
    sum += std::exp(e);
  }
  for (auto it = mid; it != sorted_.begin();) {
    --it;
    const double z = (x - *it) / h_;
    const double e = -0.5 * z * z - top;
    if (e < -kNegligible) break;
    sum += std::exp(e);
  }
  return top + std::log(sum) - std::log(static_cast<double>(sorted_.size()) * h_ * std::sqrt(2.0 * std::numbers::pi));
}

std::vector<double> Kde::log_evaluate_binned(std::span<const double> queries, std::size_t grid_size) const {
  std::vector<double> out = evaluate_binned(queries, grid_size);
  // Below a thousandth of one kernel's peak the binned value is dominated by
  // truncated tails; use the exact sum there.
  const double floor = 1e-3 / (static_cast<double>(sorted_.size()) * h_ * std::sqrt(2.0 * std::numbers::pi));
  for (std::size_t q = 0; q < queries.size(); ++q) {
    out[q] = out[q] > floor ? std::log(out[q]) : log_density(queries[q]);
  }
  return out;
}

double kde(std::span<const double> samples, double x) { return Kde(samples)(x); }

}  // namespace rslevy
