#pragma once

#include <span>
#include <vector>

namespace rslevy {

/// Silverman's rule h = 1.06 * sd * n^(-1/5).
double silverman_bandwidth(std::span<const double> samples);

/// Gaussian kernel density estimate with Silverman bandwidth.
class Kde {
 public:
  /// Requires n >= 2 and a positive sample standard deviation.
  explicit Kde(std::span<const double> samples);
  Kde(std::span<const double> samples, double bandwidth);

  double bandwidth() const { return h_; }
  std::size_t size() const { return sorted_.size(); }

  /// Exact density; kernels beyond 9 bandwidths are skipped (< 1e-17 each).
  double operator()(double x) const;

  /// Density at the query points using linear binning on `grid_size`
  /// nodes spanning the queries, then linear interpolation. Exact at nodes up
  /// to the binning error O((grid step / h)^2).
  std::vector<double> evaluate_binned(std::span<const double> queries, std::size_t grid_size = 4096) const;

  /// Exact log density, finite everywhere (log-sum-exp, no cutoff).
  double log_density(double x) const;

  /// Log density at the query points: log of the binned estimate where it is
  /// well above the kernel tails, exact log_density elsewhere. Continuous in
  /// the samples, so usable inside a likelihood.
  std::vector<double> log_evaluate_binned(std::span<const double> queries, std::size_t grid_size = 4096) const;

 private:
  std::vector<double> sorted_;
  double h_ = 0.0;
};

/// Convenience: Kde(samples)(x).
double kde(std::span<const double> samples, double x);

}  // namespace rslevy
