#include "rslevy/cos_pricer.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace rslevy {

namespace {

constexpr double kNegativeTolerance = 1e-8;
constexpr double kPilotStep = 1e-4;
constexpr double kScaledStep = 0.1;

bool finite(Complex z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

double clip_price(double raw, const char* what) {
  if (!std::isfinite(raw)) throw PricingError(std::string(what) + ": non-finite COS sum");
  if (raw < -kNegativeTolerance) {
    std::ostringstream os;
    os << what << ": COS sum " << raw << " is negative beyond tolerance; widen the interval or raise n_terms";
    throw PricingError(os.str());
  }
  return raw < 0.0 ? 0.0 : raw;
}

// Cumulants of Z_t (y0 = 0) from the log-return characteristic function.
Cumulants z_cumulants(const CharFn& cf) {
  auto log_phi = [&](double u) { return std::log(cf.log_return(Complex(u))); };

  const double h0 = kPilotStep;
  const Complex f1 = log_phi(h0), fm1 = log_phi(-h0), f2 = log_phi(2 * h0), fm2 = log_phi(-2 * h0);
  if (!finite(f1) || !finite(fm1) || !finite(f2) || !finite(fm2)) {
    throw std::domain_error("cumulants: characteristic function is not finite near 0");
  }
  const double mean0 = (8.0 * (f1 - fm1) - (f2 - fm2)).imag() / (12.0 * h0);
  const double var0 = -(16.0 * (f1 + fm1) - (f2 + fm2)).real() / (12.0 * h0 * h0);
  if (!std::isfinite(mean0) || !std::isfinite(var0) || !(var0 > 0.0)) {
    throw std::domain_error("cumulants: degenerate or non-finite variance");
  }

  // Mean-removed log-CF keeps the branch of log near zero for the wider steps.
  auto g = [&](double u) {
    return std::log(cf.log_return(Complex(u)) * std::exp(Complex(0.0, -u * mean0)));
  };
  const double h = kScaledStep / std::sqrt(var0);
  const double q = 0.5 * h;
  const Complex gq = g(q), gmq = g(-q), gh = g(h), gmh = g(-h), g2 = g(2 * h), gm2 = g(-2 * h);
  for (const Complex& v : {gq, gmq, gh, gmh, g2, gm2}) {
    if (!finite(v)) throw std::domain_error("cumulants: characteristic function is not finite near 0");
  }

  auto d1 = [](Complex p1, Complex m1, Complex p2, Complex m2, double step) {
    return (8.0 * (p1 - m1) - (p2 - m2)) / (12.0 * step);
  };
  auto d2 = [](Complex p1, Complex m1, Complex p2, Complex m2, double step) {
    return (16.0 * (p1 + m1) - (p2 + m2)) / (12.0 * step * step);
  };
  auto d4 = [](Complex p1, Complex m1, Complex p2, Complex m2, double step) {
    return (p2 - 4.0 * p1 - 4.0 * m1 + m2) / std::pow(step, 4);
  };

  const Complex first = (16.0 * d1(gq, gmq, gh, gmh, q) - d1(gh, gmh, g2, gm2, h)) / 15.0;
  const Complex second = (16.0 * d2(gq, gmq, gh, gmh, q) - d2(gh, gmh, g2, gm2, h)) / 15.0;
  const Complex fourth = (4.0 * d4(gq, gmq, gh, gmh, q) - d4(gh, gmh, g2, gm2, h)) / 3.0;

  Cumulants c{mean0 + first.imag(), -second.real(), fourth.real()};
  if (!std::isfinite(c.c1) || !std::isfinite(c.c2) || !std::isfinite(c.c4) || !(c.c2 > 0.0)) {
    throw std::domain_error("cumulants: non-finite cumulants");
  }
  return c;
}

double half_width(const Cumulants& c, double scale) { return scale * std::sqrt(c.c2 + std::sqrt(std::abs(c.c4))); }

// sum' Re{phase_k} V_k, first term halved.
double cos_sum(const std::vector<Complex>& weighted_phi, const std::vector<double>& v) {
  double sum = 0.5 * weighted_phi[0].real() * v[0];
  for (std::size_t k = 1; k < v.size(); ++k) sum += weighted_phi[k].real() * v[k];
  return sum;
}

void check_contract_against_cf(const CharFn& cf, const ContractSpec& contract) {
  contract.validate();
  if (std::abs(cf.horizon() - contract.maturity) > 1e-12 * std::max(1.0, contract.maturity)) {
    throw std::invalid_argument("COS pricing: characteristic function horizon differs from contract maturity");
  }
  const double x = std::log(cf.model().s0 / contract.strike);
  if (std::abs(cf.y0() - x) > 1e-12 * std::max(1.0, std::abs(x))) {
    throw std::invalid_argument("COS pricing: characteristic function must be centred at y0 = log(S0/K)");
  }
}

}  // namespace

void CosConfig::validate() const {
  if (n_terms < 16) throw std::invalid_argument("COS n_terms must be >= 16");
  if (!(cumulant_scale > 0.0)) throw std::invalid_argument("COS cumulant scale must be > 0");
  if (interval && !(interval->a < interval->b)) throw std::invalid_argument("COS interval needs a < b");
}

Cumulants log_return_cumulants(const CharFn& cf) {
  Cumulants c = z_cumulants(cf);
  c.c1 += cf.y0();
  return c;
}

TruncationInterval truncation_interval(const CharFn& cf, const CosConfig& config) {
  config.validate();
  if (config.interval) return *config.interval;
  const Cumulants c = log_return_cumulants(cf);
  const double hw = half_width(c, config.cumulant_scale);
  return {c.c1 - hw, c.c1 + hw};
}

std::vector<double> put_coefficients(double strike, double a, double b, int n_terms) {
  if (!(a < b) || !std::isfinite(a) || !std::isfinite(b)) throw std::invalid_argument("put_coefficients: need a < b");
  if (n_terms < 1) throw std::invalid_argument("put_coefficients: n_terms must be >= 1");
  std::vector<double> v(static_cast<std::size_t>(n_terms), 0.0);
  const double d = std::min(b, 0.0);
  if (!(a < d)) return v;

  const double width = b - a;
  const double scale = 2.0 * strike / width;
  const double ea = std::exp(a);
  const double ed = std::exp(d);
  for (int k = 0; k < n_terms; ++k) {
    const double w = k * std::numbers::pi / width;
    const double phase_d = w * (d - a);
    // chi = int_a^d e^y cos(w (y - a)) dy ; psi = int_a^d cos(w (y - a)) dy
    const double chi = (std::cos(phase_d) * ed - ea + w * std::sin(phase_d) * ed) / (1.0 + w * w);
    const double psi = k == 0 ? d - a : std::sin(phase_d) / w;
    v[static_cast<std::size_t>(k)] = scale * (psi - chi);
  }
  return v;
}

double price_put(const CharFn& cf, const ContractSpec& contract, const CosConfig& config) {
  check_contract_against_cf(cf, contract);
  const TruncationInterval iv = truncation_interval(cf, config);
  const auto v = put_coefficients(contract.strike, iv.a, iv.b, config.n_terms);
  std::vector<Complex> weighted(v.size());
  for (std::size_t k = 0; k < v.size(); ++k) {
    const double u = static_cast<double>(k) * std::numbers::pi / iv.width();
    weighted[k] = cf(Complex(u)) * std::exp(Complex(0.0, -u * iv.a));
  }
  const double raw = std::exp(-cf.model().r * contract.maturity) * cos_sum(weighted, v);
  return clip_price(raw, "put");
}

double price_call(const CharFn& cf, const ContractSpec& contract, const CosConfig& config) {
  const double put = price_put(cf, contract, config);
  const double raw = put + cf.model().s0 - contract.strike * std::exp(-cf.model().r * contract.maturity);
  return clip_price(raw, "call");
}

double cos_price(const SwitchingModel& model, const ContractSpec& contract, const CosConfig& config) {
  contract.validate();
  const CharFn cf(model, contract.maturity, std::log(model.s0 / contract.strike));
  return contract.kind == OptionKind::Call ? price_call(cf, contract, config) : price_put(cf, contract, config);
}

CosSlice::CosSlice(const SwitchingModel& model, double maturity, const CosConfig& config)
    : model_(model), maturity_(maturity), config_(config) {
  config_.validate();
  const CharFn cf(model_, maturity_, 0.0);
  if (config_.interval) {
    width_ = config_.interval->width();
  } else {
    z_cumulants_ = z_cumulants(cf);
    width_ = 2.0 * half_width(z_cumulants_, config_.cumulant_scale);
  }
  phi_z_.resize(static_cast<std::size_t>(config_.n_terms));
  for (std::size_t k = 0; k < phi_z_.size(); ++k) {
    phi_z_[k] = cf.log_return(Complex(static_cast<double>(k) * std::numbers::pi / width_));
  }
}

TruncationInterval CosSlice::interval(double strike) const {
  if (config_.interval) return *config_.interval;
  const double centre = std::log(model_.s0 / strike) + z_cumulants_.c1;
  return {centre - 0.5 * width_, centre + 0.5 * width_};
}

double CosSlice::put(double strike) const {
  if (!(strike > 0.0)) throw std::invalid_argument("strike must be > 0");
  const TruncationInterval iv = interval(strike);
  const double x = std::log(model_.s0 / strike);
  const auto v = put_coefficients(strike, iv.a, iv.b, config_.n_terms);
  std::vector<Complex> weighted(v.size());
  for (std::size_t k = 0; k < v.size(); ++k) {
    const double u = static_cast<double>(k) * std::numbers::pi / width_;
    weighted[k] = phi_z_[k] * std::exp(Complex(0.0, u * (x - iv.a)));
  }
  return clip_price(std::exp(-model_.r * maturity_) * cos_sum(weighted, v), "put");
}

double CosSlice::call(double strike) const {
  const double raw = put(strike) + model_.s0 - strike * std::exp(-model_.r * maturity_);
  return clip_price(raw, "call");
}

}  // namespace rslevy
