#include "rslevy/estimation.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <unsupported/Eigen/NonLinearOptimization>
#include <unsupported/Eigen/NumericalDiff>

#include "rslevy/charfn.hpp"
#include "rslevy/kde.hpp"
#include "rslevy/random.hpp"
#include "rslevy/subordinator.hpp"

namespace rslevy {

DescriptiveStats descriptive_stats(std::span<const double> x) {
  const std::size_t n = x.size();
  if (n < 4) throw std::invalid_argument("descriptive_stats: need at least 4 observations");
  double mean = 0.0;
  for (double v : x) mean += v;
  mean /= static_cast<double>(n);
  double m2 = 0.0, m3 = 0.0, m4 = 0.0;
  for (double v : x) {
    const double d = v - mean;
    const double d2 = d * d;
    m2 += d2;
    m3 += d2 * d;
    m4 += d2 * d2;
  }
  const double nn = static_cast<double>(n);
  m2 /= nn;
  m3 /= nn;
  m4 /= nn;
  if (!(m2 > 0.0)) throw std::invalid_argument("descriptive_stats: constant series, skewness and kurtosis undefined");
  return {mean, m2 * nn / (nn - 1.0), m3 / std::pow(m2, 1.5), m4 / (m2 * m2)};
}

std::vector<int> segment_regimes(const ReturnSeries& series, const SegmentationRule& rule) {
  const auto& z = series.log_returns;
  std::vector<int> labels(z.size(), 1);
  if (const auto* thr = std::get_if<AbsThreshold>(&rule)) {
    if (!(thr->threshold >= 0.0)) throw std::invalid_argument("threshold must be >= 0");
    for (std::size_t k = 0; k < z.size(); ++k) labels[k] = std::abs(z[k]) > thr->threshold ? 2 : 1;
    return labels;
  }
  const auto& win = std::get<DateWindows>(rule);
  if (series.dates.size() != z.size()) throw std::invalid_argument("date windows need one date per return");
  if (z.empty()) return labels;
  const Date first = series.dates.front();
  const Date last = series.dates.back();
  for (const auto& [from, to] : win.windows) {
    if (!(from <= to)) throw std::invalid_argument("date window start after end");
    if (to < first || from > last) {
      throw std::invalid_argument("date window " + format_date(from) + ".." + format_date(to) +
                                  " lies outside the series range " + format_date(first) + ".." + format_date(last));
    }
  }
  for (std::size_t k = 0; k < z.size(); ++k) {
    const Date d = series.dates[k];
    const bool inside = std::any_of(win.windows.begin(), win.windows.end(),
                                    [&](const auto& w) { return w.first <= d && d <= w.second; });
    labels[k] = inside ? 1 : 2;
  }
  return labels;
}

HoldingRates holding_rates(std::span<const int> labels, double dt) {
  if (!(dt > 0.0)) throw std::invalid_argument("dt must be > 0");
  HoldingRates hr;
  int prev = 0;
  for (int l : labels) {
    if (l != 1 && l != 2) throw std::invalid_argument("regime labels must be 1 or 2");
    if (l == 1) ++hr.days1; else ++hr.days2;
    if (l != prev) {
      if (l == 1) ++hr.runs1; else ++hr.runs2;
    }
    prev = l;
  }
  if (hr.runs1 == 0) throw std::invalid_argument("holding_rates: regime 1 never occurs");
  if (hr.runs2 == 0) throw std::invalid_argument("holding_rates: regime 2 never occurs");
  hr.sojourn1 = static_cast<double>(hr.days1) / static_cast<double>(hr.runs1) * dt;
  hr.sojourn2 = static_cast<double>(hr.days2) / static_cast<double>(hr.runs2) * dt;
  return hr;
}

std::vector<double> select_regime(std::span<const double> returns, std::span<const int> labels, int regime) {
  if (returns.size() != labels.size()) throw std::invalid_argument("labels and returns differ in length");
  std::vector<double> out;
  for (std::size_t k = 0; k < returns.size(); ++k) {
    if (labels[k] == regime) out.push_back(returns[k]);
  }
  return out;
}

std::complex<double> empirical_cf(std::span<const double> returns, double u) {
  if (returns.empty()) throw std::invalid_argument("empirical_cf: empty sample");
  double re = 0.0, im = 0.0;
  for (double z : returns) {
    re += std::cos(u * z);
    im += std::sin(u * z);
  }
  const double n = static_cast<double>(returns.size());
  return {re / n, im / n};
}

bool ParamBounds::contains(const RegimeParams& p) const {
  const auto x = to_array(p), lo = to_array(lower), hi = to_array(upper);
  for (std::size_t i = 0; i < 4; ++i) {
    if (x[i] < lo[i] || x[i] > hi[i]) return false;
  }
  return true;
}

RegimeParams ParamBounds::clamp(const RegimeParams& p) const {
  auto x = to_array(p);
  const auto lo = to_array(lower), hi = to_array(upper);
  for (std::size_t i = 0; i < 4; ++i) x[i] = std::clamp(x[i], lo[i], hi[i]);
  return from_array(x);
}

Box ParamBounds::box() const {
  const auto lo = to_array(lower), hi = to_array(upper);
  return {{lo.begin(), lo.end()}, {hi.begin(), hi.end()}};
}

std::array<double, 4> to_array(const RegimeParams& p) { return {p.mu, p.sigma, p.alpha, p.beta}; }

RegimeParams from_array(std::span<const double> x) {
  if (x.size() < 4) throw std::invalid_argument("parameter vector needs 4 entries");
  return {x[0], x[1], x[2], x[3]};
}

std::array<double, 4> model_raw_moments(const RegimeParams& p, SubordinatorFamily family, double dt) {
  const SubordinatorSpec spec = SubordinatorSpec::of(p, family);
  const double k1 = subordinator_cumulant(spec, 1), k2 = subordinator_cumulant(spec, 2);
  const double k3 = subordinator_cumulant(spec, 3), k4 = subordinator_cumulant(spec, 4);
  const double mu = p.mu, s2 = p.sigma * p.sigma, mu2 = mu * mu;
  // Cumulants of Y over dt from the expansion of dt * l(mu s + sigma^2 s^2 / 2).
  const double c1 = dt * k1 * mu;
  const double c2 = dt * (k1 * s2 + k2 * mu2);
  const double c3 = dt * (3.0 * k2 * mu * s2 + k3 * mu2 * mu);
  const double c4 = dt * (3.0 * k2 * s2 * s2 + 6.0 * k3 * mu2 * s2 + k4 * mu2 * mu2);
  return {c1, c2 + c1 * c1, c3 + 3.0 * c2 * c1 + c1 * c1 * c1,
          c4 + 4.0 * c3 * c1 + 3.0 * c2 * c2 + 6.0 * c2 * c1 * c1 + c1 * c1 * c1 * c1};
}

std::array<double, 4> sample_raw_moments(std::span<const double> x) {
  if (x.empty()) throw std::invalid_argument("empty sample");
  std::array<double, 4> m{};
  for (double v : x) {
    const double v2 = v * v;
    m[0] += v;
    m[1] += v2;
    m[2] += v2 * v;
    m[3] += v2 * v2;
  }
  for (double& mk : m) mk /= static_cast<double>(x.size());
  return m;
}

RegimeParams moment_initial_guess(std::span<const double> returns, SubordinatorFamily family,
                                  const ParamBounds& bounds, double dt) {
  const DescriptiveStats st = descriptive_stats(returns);
  const double excess = std::max(st.kurtosis - 3.0, 0.1);
  RegimeParams p;
  p.mu = st.mean / dt;
  p.sigma = std::sqrt(st.variance / dt);
  // Excess kurtosis of the increment is about 3 Var(L_1) / dt for small drift.
  const double var_l = excess * dt / 3.0;
  switch (family) {
    case SubordinatorFamily::Gamma:
      p.beta = 1.0 / var_l;
      p.alpha = p.beta;
      break;
    case SubordinatorFamily::InverseGaussian:
      p.beta = 1.0 / std::sqrt(var_l);
      p.alpha = p.beta;
      break;
    case SubordinatorFamily::Identity:
      break;
  }
  return bounds.clamp(p);
}

namespace {

// Standardized moment residuals of sampled data are O(n^-1/2); far larger
// values mean the moments are outside the family (e.g. kurtosis below 3).
constexpr double kMomentResidualLimit = 0.1;

// The law of Y is unchanged under L -> cL with a matching change of
// (mu, sigma, alpha, beta), and the scaling moves E[L_1] = alpha / beta. The
// solver pins alpha / beta at its initial value and works on
// (mu / mu_scale, log sigma, log alpha).
struct MomentSystem {
  using Scalar = double;
  enum { InputsAtCompileTime = Eigen::Dynamic, ValuesAtCompileTime = Eigen::Dynamic };
  using InputType = Eigen::VectorXd;
  using ValueType = Eigen::VectorXd;
  using JacobianType = Eigen::MatrixXd;

  std::array<double, 4> target;
  SubordinatorFamily family;
  double dt;
  double scale;     // sqrt of the target second moment
  double mu_scale;
  double mean_l;    // alpha / beta

  int inputs() const { return 3; }
  int values() const { return 4; }

  RegimeParams params(const Eigen::VectorXd& x) const {
    const double alpha = std::exp(x[2]);
    return {x[0] * mu_scale, std::exp(x[1]), alpha, alpha / mean_l};
  }
  Eigen::VectorXd coords(const RegimeParams& p) const {
    Eigen::VectorXd x(3);
    x << p.mu / mu_scale, std::log(p.sigma), std::log(p.alpha);
    return x;
  }

  int operator()(const Eigen::VectorXd& x, Eigen::VectorXd& f) const {
    const auto m = model_raw_moments(params(x), family, dt);
    double sk = 1.0;
    for (int k = 0; k < 4; ++k) {
      sk *= scale;
      f[k] = (m[static_cast<std::size_t>(k)] - target[static_cast<std::size_t>(k)]) / sk;
    }
    return 0;
  }
};

// Maps params to unit-scale optimizer coordinates and back.
struct Scaling {
  std::array<double, 4> s;
  explicit Scaling(const RegimeParams& init) {
    const auto x = to_array(init);
    for (std::size_t i = 0; i < 4; ++i) s[i] = std::max(std::abs(x[i]), i == 0 ? 1e-2 : 1e-6);
  }
  std::vector<double> to_z(const RegimeParams& p) const {
    const auto x = to_array(p);
    return {x[0] / s[0], x[1] / s[1], x[2] / s[2], x[3] / s[3]};
  }
  RegimeParams from_z(std::span<const double> z) const {
    return {z[0] * s[0], z[1] * s[1], z[2] * s[2], z[3] * s[3]};
  }
  Box box(const ParamBounds& b) const {
    auto lo = to_z(b.lower);
    auto hi = to_z(b.upper);
    return {lo, hi};
  }
};

void require_family(SubordinatorFamily family, bool allow_identity) {
  if (!allow_identity && family == SubordinatorFamily::Identity) {
    throw std::invalid_argument("estimator needs a Gamma or inverse Gaussian family");
  }
}

}  // namespace

namespace {

FitResult solve_moments(const std::array<double, 4>& target, SubordinatorFamily family, const ParamBounds& bounds,
                        const RegimeParams& init, double dt, double residual_limit) {
  require_family(family, false);
  init.validate();
  for (double m : target) {
    if (!std::isfinite(m)) throw std::invalid_argument("mom_fit: non-finite sample moments");
  }
  if (!(target[1] > 0.0)) throw std::invalid_argument("mom_fit: second moment must be > 0");

  MomentSystem sys{target, family, dt, std::sqrt(target[1]), std::max(std::abs(init.mu), 1e-2),
                   init.alpha / init.beta};
  Eigen::VectorXd x = sys.coords(init);

  Eigen::NumericalDiff<MomentSystem> diff(sys);
  Eigen::LevenbergMarquardt<Eigen::NumericalDiff<MomentSystem>> solver(diff);
  solver.parameters.xtol = 1e-14;
  solver.parameters.ftol = 1e-16;
  solver.parameters.maxfev = 4000;
  const auto status = solver.minimize(x);

  const RegimeParams raw = sys.params(x);
  const bool finite = x.allFinite() && std::isfinite(raw.beta);
  const RegimeParams best = finite ? bounds.clamp(raw) : init;
  Eigen::VectorXd f(4);
  sys(sys.coords(best), f);
  const double residual = f.norm();
  const bool failed = status == Eigen::LevenbergMarquardtSpace::ImproperInputParameters ||
                      status == Eigen::LevenbergMarquardtSpace::TooManyFunctionEvaluation;
  if (!finite || failed || !(residual <= residual_limit)) {
    throw FitError("mom_fit: moment system not solved (status " + std::to_string(static_cast<int>(status)) +
                       ", residual " + std::to_string(residual) + ")",
                   best, residual);
  }
  FitResult out;
  out.params = best;
  out.objective = residual;
  out.iterations = static_cast<int>(solver.nfev);
  out.stop_reason = best == raw ? "solved" : "solved_then_clamped";
  return out;
}

}  // namespace

FitResult mom_fit(const std::array<double, 4>& target, SubordinatorFamily family, const ParamBounds& bounds,
                  const RegimeParams& init, double dt) {
  return solve_moments(target, family, bounds, init, dt, kMomentResidualLimit);
}

FitResult mom_fit(std::span<const double> returns, SubordinatorFamily family, const ParamBounds& bounds,
                  const RegimeParams& init, double dt) {
  const auto m = sample_raw_moments(returns);
  // Heavy tails on short samples leave the fourth moment noisy; allow three
  // of its standard errors.
  double ss = 0.0;
  for (double x : returns) ss += (x * x * x * x - m[3]) * (x * x * x * x - m[3]);
  const double n = static_cast<double>(returns.size());
  const double se4 = std::sqrt(ss / (n - 1.0) / n) / (m[1] * m[1]);
  return solve_moments(m, family, bounds, init, dt, std::max(kMomentResidualLimit, 3.0 * se4));
}

std::complex<double> increment_cf(const RegimeParams& p, SubordinatorFamily family, double dt, double u) {
  return std::exp(dt * regime_char_exponent(p, family, Complex(u)));
}

GaussHermite gauss_hermite(int n) {
  if (n < 1) throw std::invalid_argument("gauss_hermite: n must be >= 1");
  Eigen::MatrixXd jacobi = Eigen::MatrixXd::Zero(n, n);
  for (int k = 1; k < n; ++k) {
    const double off = std::sqrt(0.5 * k);
    jacobi(k, k - 1) = off;
    jacobi(k - 1, k) = off;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(jacobi);
  GaussHermite gh;
  gh.nodes.resize(static_cast<std::size_t>(n));
  gh.weights.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    gh.nodes[static_cast<std::size_t>(i)] = eig.eigenvalues()[i];
    const double v0 = eig.eigenvectors()(0, i);
    gh.weights[static_cast<std::size_t>(i)] = std::sqrt(std::numbers::pi) * v0 * v0;
  }
  return gh;
}

CfDistance::CfDistance(std::span<const double> returns, SubordinatorFamily family, double dt, int nodes)
    : family_(family), dt_(dt) {
  const GaussHermite gh = gauss_hermite(nodes);
  // int g(u) N(0,1)(u) du = pi^(-1/2) sum w_i g(sqrt(2) x_i)
  for (std::size_t i = 0; i < gh.nodes.size(); ++i) {
    u_.push_back(std::sqrt(2.0) * gh.nodes[i]);
    w_.push_back(gh.weights[i] / std::sqrt(std::numbers::pi));
    empirical_.push_back(empirical_cf(returns, u_.back()));
  }
}

double CfDistance::squared(const RegimeParams& p) const {
  double sum = 0.0;
  for (std::size_t i = 0; i < u_.size(); ++i) sum += w_[i] * std::norm(increment_cf(p, family_, dt_, u_[i]) - empirical_[i]);
  return sum;
}

double CfDistance::operator()(const RegimeParams& p) const { return std::sqrt(squared(p)); }

namespace {

FitResult run_quasi_newton(const std::function<double(const RegimeParams&)>& objective, const ParamBounds& bounds,
                           const RegimeParams& init, double fd_step, const char* name) {
  const Scaling sc(init);
  const Box box = sc.box(bounds);
  const RegimeParams start = bounds.clamp(init);
  const double f0 = objective(start);
  if (!std::isfinite(f0)) throw FitError(std::string(name) + ": objective not finite at init", start, f0);
  const double norm = std::max(std::abs(f0), 1e-300);
  Objective f = [&](std::span<const double> z) {
    try {
      return objective(sc.from_z(z)) / norm;
    } catch (const std::domain_error&) {
      return std::numeric_limits<double>::infinity();
    } catch (const std::invalid_argument&) {
      return std::numeric_limits<double>::infinity();
    }
  };
  QuasiNewtonOptions opts;
  opts.fd_step = fd_step;
  opts.max_iters = 300;
  opts.value_tolerance = 1e-12;
  const OptimResult r = projected_bfgs(f, sc.to_z(start), box, opts);
  if (!std::isfinite(r.value)) throw FitError(std::string(name) + ": optimizer diverged", start, r.value);
  FitResult out;
  out.params = bounds.clamp(sc.from_z(r.x));
  out.objective = r.value * norm;
  out.iterations = r.iterations;
  out.stop_reason = r.stop_reason;
  return out;
}

}  // namespace

FitResult mde_fit(std::span<const double> returns, SubordinatorFamily family, const ParamBounds& bounds,
                  const RegimeParams& init, double dt) {
  require_family(family, true);
  if (returns.size() < 30) throw std::invalid_argument("mde_fit: need at least 30 returns");
  const CfDistance distance(returns, family, dt);
  FitResult out = run_quasi_newton([&](const RegimeParams& p) { return distance.squared(p); }, bounds, init, 1e-6,
                                   "mde_fit");
  out.objective = std::sqrt(out.objective);
  return out;
}

namespace {

// Uniforms and normals behind the simulated increments, shared by every
// candidate parameter (common random numbers).
struct CommonDraws {
  std::vector<double> u;
  std::vector<double> z;
};

CommonDraws common_draws(std::size_t n_sim, std::uint64_t seed) {
  CommonDraws d{std::vector<double>(n_sim), std::vector<double>(n_sim)};
  for (std::size_t i = 0; i < n_sim; ++i) {
    RandomStream rng(seed, i);
    d.u[i] = rng.uniform();
    d.z[i] = rng.normal();
  }
  return d;
}

// Increments come from the subordinator quantile at fixed uniforms, so the
// likelihood is smooth in the parameters and finite differences are usable.
double log_likelihood(const RegimeParams& p, SubordinatorFamily family, double dt, std::span<const double> returns,
                      const CommonDraws& draws) {
  if (returns.empty()) throw std::invalid_argument("likelihood: empty sample");
  p.validate();
  const SubordinatorSpec spec = SubordinatorSpec::of(p, family);
  std::vector<double> sim(draws.u.size());
  for (std::size_t i = 0; i < sim.size(); ++i) {
    const double dl = increment_quantile(spec, dt, draws.u[i]);
    sim[i] = p.mu * dl + p.sigma * std::sqrt(dl) * draws.z[i];
  }
  const Kde density(sim);
  double ll = 0.0;
  for (double v : density.log_evaluate_binned(returns)) ll += v;
  if (!std::isfinite(ll)) throw std::domain_error("likelihood: non-finite log density");
  return ll;
}

}  // namespace

double simulated_log_likelihood(const RegimeParams& p, SubordinatorFamily family, double dt,
                                std::span<const double> returns, std::size_t n_sim, std::uint64_t seed) {
  return log_likelihood(p, family, dt, returns, common_draws(n_sim, seed));
}

FitResult mle_fit(std::span<const double> returns, SubordinatorFamily family, const ParamBounds& bounds,
                  const RegimeParams& init, std::size_t n_sim, std::uint64_t seed, double dt) {
  require_family(family, true);
  if (n_sim < 10000) throw std::invalid_argument("mle_fit: n_sim must be >= 10^4");
  if (returns.size() < 2) throw std::invalid_argument("mle_fit: need at least 2 returns");
  const double n = static_cast<double>(returns.size());
  const CommonDraws draws = common_draws(n_sim, seed);
  FitResult out = run_quasi_newton(
      [&](const RegimeParams& p) { return -log_likelihood(p, family, dt, returns, draws) / n; }, bounds, init, 1e-5,
      "mle_fit");
  out.objective *= n;
  return out;
}

}  // namespace rslevy
