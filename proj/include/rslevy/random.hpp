#pragma once

#include <cstdint>
#include <random>

namespace rslevy {

/// Mixes a 64-bit value (SplitMix64 finalizer).
std::uint64_t mix64(std::uint64_t x);

/// Independent, reproducible random stream keyed by (seed, stream index).
///
/// Monte Carlo paths use one stream per path index so results do not depend
/// on how paths are distributed over worker threads.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed, std::uint64_t stream = 0);

  /// Uniform on the open interval (0, 1).
  double uniform();
  double normal();
  /// Exponential with the given rate (mean 1/rate); rate must be > 0.
  double exponential(double rate);

  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

}  // namespace rslevy
