#include "rslevy/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace rslevy {

namespace {

double norm2(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

void check_box(const Box& box, std::span<const double> x) {
  if (box.lower.size() != box.upper.size() || box.lower.size() != x.size()) {
    throw std::invalid_argument("optimizer: box and start point dimensions differ");
  }
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(box.lower[i] <= box.upper[i])) throw std::invalid_argument("optimizer: empty box");
  }
}

double fd_step_for(double xi, double rel_step) { return rel_step * std::max(std::abs(xi), 1.0); }

// Objective that maps NaN to +inf and counts calls.
struct Counted {
  const Objective& f;
  int calls = 0;
  double operator()(std::span<const double> x) {
    ++calls;
    const double v = f(x);
    return std::isnan(v) ? std::numeric_limits<double>::infinity() : v;
  }
};

}  // namespace

std::vector<double> Box::project(std::span<const double> x) const {
  std::vector<double> out(x.begin(), x.end());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = std::clamp(out[i], lower[i], upper[i]);
  return out;
}

bool Box::contains(std::span<const double> x) const {
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] < lower[i] || x[i] > upper[i]) return false;
  }
  return true;
}

std::vector<double> forward_difference_gradient(const Objective& f, std::span<const double> x, double fx,
                                                const Box& box, double rel_step, int* evaluations) {
  std::vector<double> g(x.size());
  std::vector<double> probe(x.begin(), x.end());
  for (std::size_t i = 0; i < x.size(); ++i) {
    double h = fd_step_for(x[i], rel_step);
    if (x[i] + h > box.upper[i]) h = -h;
    probe[i] = x[i] + h;
    const double fp = f(probe);
    if (evaluations) ++*evaluations;
    g[i] = (fp - fx) / h;
    probe[i] = x[i];
  }
  return g;
}

std::vector<double> central_difference_gradient(const Objective& f, std::span<const double> x, const Box& box,
                                                double rel_step, int* evaluations) {
  std::vector<double> g(x.size());
  std::vector<double> probe(x.begin(), x.end());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double h = fd_step_for(x[i], rel_step);
    const double hi = std::min(x[i] + h, box.upper[i]);
    const double lo = std::max(x[i] - h, box.lower[i]);
    probe[i] = hi;
    const double fp = f(probe);
    probe[i] = lo;
    const double fm = f(probe);
    probe[i] = x[i];
    if (evaluations) *evaluations += 2;
    g[i] = hi > lo ? (fp - fm) / (hi - lo) : 0.0;
  }
  return g;
}

OptimResult projected_gradient_descent(const Objective& objective, std::vector<double> x0, const Box& box,
                                       const GradientDescentOptions& options) {
  check_box(box, x0);
  Counted f{objective};
  OptimResult res;
  std::vector<double> x = box.project(x0);
  double fx = f(x);
  if (!std::isfinite(fx)) throw std::invalid_argument("gradient descent: objective not finite at start point");
  res.history.push_back(fx);

  double alpha = 1.0;
  res.stop_reason = "max_iters";
  for (int it = 0; it < options.max_iters; ++it) {
    const auto g = forward_difference_gradient(std::ref(f), x, fx, box, options.fd_step);
    const double gnorm = norm2(g);
    if (gnorm == 0.0 || !std::isfinite(gnorm)) {
      res.stop_reason = gnorm == 0.0 ? "zero_gradient" : "non_finite_gradient";
      res.converged = gnorm == 0.0;
      break;
    }
    // First trial makes a move of unit length in the scaled variables, later
    // trials grow from the last accepted step.
    double t = std::max(alpha * 2.0, 1e-300);
    if (it == 0) t = 1.0 / gnorm;
    bool accepted = false;
    std::vector<double> trial(x.size());
    double f_trial = fx;
    for (int bt = 0; bt < options.max_backtracks; ++bt) {
      for (std::size_t i = 0; i < x.size(); ++i) trial[i] = x[i] - t * g[i];
      trial = box.project(trial);
      std::vector<double> d(x.size());
      for (std::size_t i = 0; i < x.size(); ++i) d[i] = trial[i] - x[i];
      f_trial = f(trial);
      if (std::isfinite(f_trial) && f_trial <= fx + options.armijo * dot(g, d)) {
        accepted = true;
        break;
      }
      t *= 0.5;
    }
    if (!accepted) {
      res.stop_reason = "line_search_failed";
      res.converged = true;
      break;
    }
    alpha = t;
    std::vector<double> d(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) d[i] = trial[i] - x[i];
    const double step = norm2(d);
    x = trial;
    fx = f_trial;
    res.iterations = it + 1;
    res.history.push_back(fx);
    if (step < options.step_tolerance) {
      res.stop_reason = "step_tolerance";
      res.converged = true;
      break;
    }
  }
  res.x = x;
  res.value = fx;
  res.evaluations = f.calls;
  return res;
}

OptimResult projected_bfgs(const Objective& objective, std::vector<double> x0, const Box& box,
                           const QuasiNewtonOptions& options) {
  check_box(box, x0);
  Counted f{objective};
  const std::size_t n = x0.size();
  OptimResult res;
  std::vector<double> x = box.project(x0);
  double fx = f(x);
  if (!std::isfinite(fx)) throw std::invalid_argument("quasi-newton: objective not finite at start point");
  res.history.push_back(fx);

  std::vector<double> h(n * n, 0.0);  // inverse Hessian estimate
  auto reset = [&] {
    std::fill(h.begin(), h.end(), 0.0);
    for (std::size_t i = 0; i < n; ++i) h[i * n + i] = 1.0;
  };
  reset();

  auto g = central_difference_gradient(std::ref(f), x, box, options.fd_step);
  res.stop_reason = "max_iters";
  for (int it = 0; it < options.max_iters; ++it) {
    // Free variables: not pinned at a bound with the gradient pushing out.
    std::vector<bool> free(n, true);
    double pg = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const bool at_lo = x[i] <= box.lower[i] && g[i] > 0.0;
      const bool at_hi = x[i] >= box.upper[i] && g[i] < 0.0;
      free[i] = !(at_lo || at_hi);
      if (free[i]) pg = std::max(pg, std::abs(g[i]));
    }
    if (pg < options.gradient_tolerance) {
      res.stop_reason = "gradient_tolerance";
      res.converged = true;
      break;
    }

    std::vector<double> d(n, 0.0);
    auto compute_direction = [&] {
      for (std::size_t i = 0; i < n; ++i) {
        if (!free[i]) continue;
        double s = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
          if (free[j]) s += h[i * n + j] * g[j];
        }
        d[i] = -s;
      }
    };
    compute_direction();
    if (dot(g, d) >= 0.0) {
      reset();
      compute_direction();
    }

    double t = 1.0;
    if (it == 0) t = std::min(1.0, 1.0 / std::max(norm2(d), 1e-300));
    std::vector<double> trial(n);
    double f_trial = fx;
    bool accepted = false;
    for (int bt = 0; bt < options.max_backtracks; ++bt) {
      for (std::size_t i = 0; i < n; ++i) trial[i] = x[i] + t * d[i];
      trial = box.project(trial);
      std::vector<double> step(n);
      for (std::size_t i = 0; i < n; ++i) step[i] = trial[i] - x[i];
      f_trial = f(trial);
      if (std::isfinite(f_trial) && f_trial <= fx + options.armijo * dot(g, step)) {
        accepted = true;
        break;
      }
      t *= 0.5;
    }
    if (!accepted) {
      bool was_identity = true;
      for (std::size_t i = 0; i < n && was_identity; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
          if (h[i * n + j] != (i == j ? 1.0 : 0.0)) {
            was_identity = false;
            break;
          }
        }
      }
      if (!was_identity) {
        reset();
        continue;
      }
      res.stop_reason = "line_search_failed";
      res.converged = true;
      break;
    }

    std::vector<double> s(n);
    for (std::size_t i = 0; i < n; ++i) s[i] = trial[i] - x[i];
    const double step_norm = norm2(s);
    const double f_prev = fx;
    x = trial;
    fx = f_trial;
    res.iterations = it + 1;
    res.history.push_back(fx);

    const auto g_new = central_difference_gradient(std::ref(f), x, box, options.fd_step);
    std::vector<double> y(n);
    for (std::size_t i = 0; i < n; ++i) y[i] = g_new[i] - g[i];
    g = g_new;

    if (step_norm < options.step_tolerance) {
      res.stop_reason = "step_tolerance";
      res.converged = true;
      break;
    }
    if (std::abs(f_prev - fx) <= options.value_tolerance * std::max(1.0, std::abs(fx))) {
      res.stop_reason = "value_tolerance";
      res.converged = true;
      break;
    }

    const double sy = dot(s, y);
    if (sy > 1e-12 * norm2(s) * norm2(y)) {
      // H+ = (I - rho s y') H (I - rho y s') + rho s s'
      const double rho = 1.0 / sy;
      std::vector<double> hy(n, 0.0);
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) hy[i] += h[i * n + j] * y[j];
      }
      const double yhy = dot(y, hy);
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
          h[i * n + j] += (1.0 + rho * yhy) * rho * s[i] * s[j] - rho * (hy[i] * s[j] + s[i] * hy[j]);
        }
      }
    }
  }
  res.x = x;
  res.value = fx;
  res.evaluations = f.calls;
  return res;
}

}  // namespace rslevy
