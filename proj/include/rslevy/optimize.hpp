#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

namespace rslevy {

using Objective = std::function<double(std::span<const double>)>;

/// Axis-aligned feasible set.
struct Box {
  std::vector<double> lower;
  std::vector<double> upper;

  std::size_t size() const { return lower.size(); }
  std::vector<double> project(std::span<const double> x) const;
  bool contains(std::span<const double> x) const;
};

struct OptimResult {
  std::vector<double> x;
  double value = 0.0;
  int iterations = 0;
  int evaluations = 0;
  std::string stop_reason;
  bool converged = false;
  /// Objective after each accepted iteration (index 0 is the start point).
  std::vector<double> history;
};

/// Forward differences with step rel_step * max(|x_i|, 1), taken backwards
/// when the forward point would leave the box.
std::vector<double> forward_difference_gradient(const Objective& f, std::span<const double> x, double fx,
                                                const Box& box, double rel_step, int* evaluations = nullptr);

/// Central differences, one-sided at active bounds.
std::vector<double> central_difference_gradient(const Objective& f, std::span<const double> x, const Box& box,
                                                double rel_step, int* evaluations = nullptr);

struct GradientDescentOptions {
  double step_tolerance = 1e-10;
  int max_iters = 1000;
  double fd_step = 1e-6;
  double armijo = 1e-4;
  int max_backtracks = 40;
};

/// Projected steepest descent with forward-difference gradients and
/// backtracking along the projection arc. Stops when ||x_t - x_{t-1}||_2 <
/// step_tolerance, when no decrease can be found, or after max_iters.
OptimResult projected_gradient_descent(const Objective& f, std::vector<double> x0, const Box& box,
                                       const GradientDescentOptions& options = {});

struct QuasiNewtonOptions {
  double step_tolerance = 1e-10;
  double value_tolerance = 1e-12;
  double gradient_tolerance = 1e-10;
  int max_iters = 500;
  double fd_step = 1e-6;
  double armijo = 1e-4;
  int max_backtracks = 40;
};

/// Projected BFGS on a box: variables pinned at a bound with the gradient
/// pointing outward are frozen for the iteration; the inverse-Hessian
/// estimate is reset whenever the search direction stops being a descent
/// direction.
OptimResult projected_bfgs(const Objective& f, std::vector<double> x0, const Box& box,
                           const QuasiNewtonOptions& options = {});

}  // namespace rslevy
