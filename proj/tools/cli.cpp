#include "cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <json.hpp>
#include <optional>
#include <sstream>

#include "rslevy/black_scholes.hpp"
#include "rslevy/calibration.hpp"
#include "rslevy/charfn.hpp"
#include "rslevy/cos_pricer.hpp"
#include "rslevy/data_io.hpp"
#include "rslevy/estimation.hpp"
#include "rslevy/mc_engine.hpp"

namespace rslevy::cli {

namespace {

using nlohmann::json;

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

unsigned default_threads() {
  if (const char* env = std::getenv("RSLEVY_THREADS")) {
    try {
      const int n = std::stoi(env);
      if (n > 0) return static_cast<unsigned>(n);
    } catch (const std::exception&) {
    }
  }
  return 0;
}

// Writes to --out when given, otherwise to stdout.
void emit(const std::string& path, const std::string& text, std::ostream& out) {
  if (path.empty()) {
    out << text;
  } else {
    write_text(path, text);
  }
}

std::vector<double> linspace(double lo, double hi, int n) {
  if (n < 1) throw std::invalid_argument("grid needs at least one point");
  std::vector<double> v(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) v[static_cast<std::size_t>(i)] = n == 1 ? lo : lo + (hi - lo) * i / (n - 1);
  return v;
}

struct Common {
  std::string model;
  std::string out;
  std::uint64_t seed = 1;
  unsigned threads = 0;
};

// price ----------------------------------------------------------------------

struct PriceArgs : Common {
  std::string contracts;
  std::string method = "cos";
  int terms = 512;
  std::size_t paths = 100000;
  double dt = kTradingDay;
};

void cmd_price(const PriceArgs& a, std::ostream& out) {
  const SwitchingModel model = load_model(a.model);
  const auto contracts = load_contracts(a.contracts);
  std::ostringstream csv;
  if (a.method == "cos") {
    CosConfig cfg;
    cfg.n_terms = a.terms;
    csv << "maturity,strike,kind,price,method\n";
    for (const auto& c : contracts) {
      csv << fmt(c.maturity) << ',' << fmt(c.strike) << ',' << to_string(c.kind) << ','
          << fmt(cos_price(model, c, cfg)) << ",cos\n";
    }
  } else {
    McConfig cfg;
    cfg.n_paths = a.paths;
    cfg.dt = a.dt;
    cfg.seed = a.seed;
    cfg.threads = a.threads;
    csv << "maturity,strike,kind,price,method,std_error,ci_lo,ci_hi\n";
    for (const auto& c : contracts) {
      const McResult r = price_european_mc(model, c, cfg);
      csv << fmt(c.maturity) << ',' << fmt(c.strike) << ',' << to_string(c.kind) << ',' << fmt(r.price) << ",mc,"
          << fmt(r.std_error) << ',' << fmt(r.ci_lo) << ',' << fmt(r.ci_hi) << '\n';
    }
  }
  emit(a.out, csv.str(), out);
}

// simulate -------------------------------------------------------------------

struct SimulateArgs : Common {
  double horizon = 1.0;
  double dt = kTradingDay;
};

void cmd_simulate(const SimulateArgs& a, std::ostream& out) {
  const SwitchingModel model = load_model(a.model);
  if (!(a.horizon > 0.0)) throw std::invalid_argument("--horizon must be > 0");
  if (!(a.dt > 0.0)) throw std::invalid_argument("--dt must be > 0");
  RandomStream rng(a.seed, 0);
  const PricePath path = simulate_path(model, a.horizon, a.dt, rng);
  const double y0 = std::log(model.s0);
  std::ostringstream csv;
  csv << "time,log_price,regime\n";
  for (std::size_t i = 0; i < path.times.size(); ++i) {
    csv << fmt(path.times[i]) << ',' << fmt(y0 + path.log_prices[i]) << ',' << path.regimes[i] << '\n';
  }
  emit(a.out, csv.str(), out);
}

// plot-cf --------------------------------------------------------------------

struct PlotCfArgs : Common {
  double horizon = 1.0;
  double u_min = -20.0;
  double u_max = 20.0;
  int points = 401;
};

void cmd_plot_cf(const PlotCfArgs& a, std::ostream& out) {
  const SwitchingModel model = load_model(a.model);
  if (!(a.horizon > 0.0)) throw std::invalid_argument("--horizon must be > 0");
  if (!(a.u_max > a.u_min)) throw std::invalid_argument("--u-max must exceed --u-min");
  const CharFn cf(model, a.horizon, 0.0);
  std::vector<std::vector<double>> rows;
  for (double u : linspace(a.u_min, a.u_max, a.points)) {
    const Complex v = cf(Complex(u));
    rows.push_back({u, v.real(), v.imag()});
  }
  if (a.out.empty()) {
    out << "u,re,im\n";
    for (const auto& r : rows) out << fmt(r[0]) << ',' << fmt(r[1]) << ',' << fmt(r[2]) << '\n';
  } else {
    write_csv(a.out, {"u", "re", "im"}, rows);
  }
}

// estimate -------------------------------------------------------------------

struct EstimateArgs : Common {
  std::string prices;
  std::string method = "mom";
  std::string family = "ig";
  std::string rule = "threshold:3";
  std::size_t n_sim = 10000;
  double clip_floor = 0.01;
  double r = 0.0;
};

SegmentationRule parse_rule(const std::string& text) {
  const auto colon = text.find(':');
  if (colon == std::string::npos) throw std::invalid_argument("--regime-rule must be threshold:<c> or windows:<file>");
  const std::string kind = text.substr(0, colon);
  const std::string arg = text.substr(colon + 1);
  if (kind == "threshold") {
    std::size_t used = 0;
    double c = 0.0;
    try {
      c = std::stod(arg, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != arg.size() || arg.empty()) throw std::invalid_argument("invalid threshold '" + arg + "'");
    return AbsThreshold{c};
  }
  if (kind == "windows") return DateWindows{load_windows(arg)};
  throw std::invalid_argument("unknown regime rule '" + kind + "'");
}

FitResult fit_regime(const EstimateArgs& a, const std::vector<double>& z, SubordinatorFamily family, std::uint64_t seed) {
  const ParamBounds bounds;
  const RegimeParams guess = moment_initial_guess(z, family, bounds);
  std::optional<FitResult> mom;
  try {
    mom = mom_fit(z, family, bounds, guess);
  } catch (const FitError&) {
    if (a.method == "mom") throw;
  }
  if (a.method == "mom") return *mom;
  const RegimeParams init = mom ? mom->params : guess;
  if (a.method == "mde") return mde_fit(z, family, bounds, init);
  return mle_fit(z, family, bounds, init, a.n_sim, seed);
}

void cmd_estimate(const EstimateArgs& a, std::ostream& out) {
  if (a.method != "mom" && a.method != "mde" && a.method != "mle") {
    throw std::invalid_argument("--method must be mom, mde or mle");
  }
  const SubordinatorFamily family = parse_family(a.family);
  if (family == SubordinatorFamily::Identity) throw std::invalid_argument("--family must be gamma or ig");
  const SegmentationRule rule = parse_rule(a.rule);
  const LoadedPrices data = load_prices(a.prices, a.clip_floor);
  const auto labels = segment_regimes(data.returns, rule);
  const HoldingRates hr = holding_rates(labels, data.returns.dt);

  SwitchingModel model;
  model.family = family;
  model.s0 = data.raw.prices.back() > 0.0 ? data.raw.prices.back() : a.clip_floor;
  model.r = a.r;
  model.lambda12 = hr.lambda12();
  model.lambda21 = hr.lambda21();
  json fits = json::array();
  for (int j = 1; j <= 2; ++j) {
    const auto z = select_regime(data.returns.log_returns, labels, j);
    const DescriptiveStats st = descriptive_stats(z);
    const FitResult fit = fit_regime(a, z, family, a.seed + static_cast<std::uint64_t>(j - 1));
    model.regimes[static_cast<std::size_t>(j - 1)] = fit.params;
    fits.push_back({{"regime", j},
                    {"n", z.size()},
                    {"mean", st.mean},
                    {"variance", st.variance},
                    {"stdev", std::sqrt(st.variance)},
                    {"skewness", st.skewness},
                    {"kurtosis", st.kurtosis},
                    {"objective", fit.objective},
                    {"iterations", fit.iterations},
                    {"stop_reason", fit.stop_reason}});
  }
  json doc = json::parse(model_to_json(model));
  doc["method"] = a.method;
  doc["sojourn1"] = hr.sojourn1;
  doc["sojourn2"] = hr.sojourn2;
  doc["clipped_prices"] = data.clipped;
  doc["fits"] = fits;
  emit(a.out, doc.dump(2) + "\n", out);
  if (!a.out.empty()) {
    std::ostringstream msg;
    msg << "estimated " << a.method << " (" << to_string(family) << "): regime 1 n=" << fits[0]["n"]
        << ", regime 2 n=" << fits[1]["n"] << ", mean sojourns " << hr.sojourn1 << " / " << hr.sojourn2 << " years\n";
    out << msg.str();
  }
}

// calibrate ------------------------------------------------------------------

struct CalibrateArgs : Common {
  std::string quotes;
  std::string market;
  std::string config;
  bool seed_given = false;
};

CalibConfig load_calib_config(const std::string& path) {
  CalibConfig cfg;
  if (path.empty()) return cfg;
  json doc;
  try {
    doc = json::parse(read_text(path));
  } catch (const json::parse_error& e) {
    throw DataError(path + ": " + e.what());
  }
  if (!doc.is_object()) throw DataError(path + ": calibration settings must be a JSON object");
  static const char* const known[] = {"step_tolerance", "max_iters",          "fd_step",
                                      "mc_paths",       "mc_seed",            "mc_dt",
                                      "cos_terms",      "otm_fallback",       "otm_call_moneyness",
                                      "otm_put_moneyness", "drift"};
  for (const auto& item : doc.items()) {
    if (std::find(std::begin(known), std::end(known), item.key()) == std::end(known)) {
      throw DataError(path + ": unknown setting '" + item.key() + "'");
    }
  }
  try {
    cfg.step_tolerance = doc.value("step_tolerance", cfg.step_tolerance);
    cfg.max_iters = doc.value("max_iters", cfg.max_iters);
    cfg.fd_step = doc.value("fd_step", cfg.fd_step);
    cfg.mc_paths = doc.value("mc_paths", cfg.mc_paths);
    cfg.mc_seed = doc.value("mc_seed", cfg.mc_seed);
    cfg.mc_dt = doc.value("mc_dt", cfg.mc_dt);
    cfg.cos.n_terms = doc.value("cos_terms", cfg.cos.n_terms);
    cfg.otm.enabled = doc.value("otm_fallback", cfg.otm.enabled);
    cfg.otm.call_moneyness = doc.value("otm_call_moneyness", cfg.otm.call_moneyness);
    cfg.otm.put_moneyness = doc.value("otm_put_moneyness", cfg.otm.put_moneyness);
    const std::string drift = doc.value("drift", std::string("risk_neutral"));
    if (drift == "risk_neutral") {
      cfg.drift = DriftMode::RiskNeutral;
    } else if (drift == "free") {
      cfg.drift = DriftMode::Free;
    } else {
      throw std::invalid_argument("drift must be risk_neutral or free");
    }
  } catch (const json::exception& e) {
    throw DataError(path + ": " + e.what());
  }
  cfg.validate();
  return cfg;
}

void cmd_calibrate(const CalibrateArgs& a, std::ostream& out) {
  SwitchingModel init = load_model(a.model);
  if (!a.market.empty()) {
    json m;
    try {
      m = json::parse(read_text(a.market));
      if (m.contains("s0")) init.s0 = m.at("s0").get<double>();
      if (m.contains("r")) init.r = m.at("r").get<double>();
    } catch (const json::exception& e) {
      throw DataError(a.market + ": " + e.what());
    }
    init.validate();
  }
  const QuoteTable quotes = load_quotes(a.quotes);
  CalibConfig cfg = load_calib_config(a.config);
  if (a.seed_given) cfg.mc_seed = a.seed;
  cfg.threads = a.threads;
  const CalibReport rep = calibrate(quotes, init, ParamBounds{}, cfg);
  json doc = json::parse(model_to_json(rep.model));
  doc["calibration"] = {{"iterations", rep.iterations},
                        {"initial_objective", rep.initial_objective},
                        {"objective", rep.objective},
                        {"mean_quote", quotes.mean_quote()},
                        {"stop_reason", rep.stop_reason}};
  emit(a.out, doc.dump(2) + "\n", out);
  if (!a.out.empty()) {
    out << "calibrated " << quotes.size() << " quotes: J " << rep.initial_objective << " -> " << rep.objective
        << " after " << rep.iterations << " iterations (" << rep.stop_reason << ")\n";
  }
}

// bs-check -------------------------------------------------------------------

struct BsCheckArgs : Common {
  std::size_t paths = 100000;
  double dt = kTradingDay;
};

void cmd_bs_check(const BsCheckArgs& a, std::ostream& out) {
  struct Row {
    double t, k, r, sigma;
  };
  const double s0 = 20.0;
  const Row rows[] = {{1.0, 1.0, 0.04, 0.5}, {3.0, 1.0, 0.1, 1.0}, {2.0, 30.0, 0.5, 0.001}};
  std::vector<std::vector<double>> table;
  char line[256];
  out << "    T      K     r  sigma   closed-form          COS           MC    MC std err\n";
  for (const Row& row : rows) {
    SwitchingModel m;
    m.family = SubordinatorFamily::Identity;
    m.s0 = s0;
    m.r = row.r;
    m.lambda12 = 1.0;
    m.lambda21 = 1.0;
    const RegimeParams p{row.r - 0.5 * row.sigma * row.sigma, row.sigma, 1.0, 1.0};
    m.regimes = {p, p};
    const ContractSpec c{row.k, row.t, OptionKind::Call};
    const double bs = bs_closed_form(s0, row.k, row.r, row.sigma, row.t, OptionKind::Call);
    const double cos = cos_price(m, c);
    McConfig mc;
    mc.n_paths = a.paths;
    mc.dt = a.dt;
    mc.seed = a.seed;
    mc.threads = a.threads;
    const McResult r = price_european_mc(m, c, mc);
    std::snprintf(line, sizeof line, "%5.2f %6.2f %5.2f %6.3f %13.6f %12.6f %12.6f %13.6f\n", row.t, row.k, row.r,
                  row.sigma, bs, cos, r.price, r.std_error);
    out << line;
    table.push_back({s0, row.t, row.k, row.r, row.sigma, bs, cos, r.price, r.std_error, r.ci_lo, r.ci_hi});
  }
  if (!a.out.empty()) {
    write_csv(a.out, {"s0", "maturity", "strike", "r", "sigma", "bs", "cos", "mc", "mc_std_error", "mc_ci_lo",
                      "mc_ci_hi"},
              table);
  }
}

// payoff-surface -------------------------------------------------------------

struct SurfaceArgs : Common {
  double t_min = 0.1, t_max = 2.0;
  int t_points = 20;
  double k_min = 0.0, k_max = 0.0;
  int k_points = 21;
  std::string kind = "call";
  int terms = 512;
};

void cmd_payoff_surface(const SurfaceArgs& a, std::ostream& out) {
  const SwitchingModel model = load_model(a.model);
  const OptionKind kind = parse_option_kind(a.kind);
  const double k_lo = a.k_min > 0.0 ? a.k_min : 0.5 * model.s0;
  const double k_hi = a.k_max > 0.0 ? a.k_max : 1.5 * model.s0;
  if (!(a.t_min > 0.0) || !(a.t_max >= a.t_min)) throw std::invalid_argument("maturity range must be positive and ordered");
  if (!(k_hi >= k_lo)) throw std::invalid_argument("strike range must be ordered");
  CosConfig cfg;
  cfg.n_terms = a.terms;
  std::vector<std::vector<double>> rows;
  for (double t : linspace(a.t_min, a.t_max, a.t_points)) {
    const CosSlice slice(model, t, cfg);
    for (double k : linspace(k_lo, k_hi, a.k_points)) rows.push_back({t, k, slice.price(k, kind)});
  }
  if (a.out.empty()) {
    out << "maturity,strike,price\n";
    for (const auto& r : rows) out << fmt(r[0]) << ',' << fmt(r[1]) << ',' << fmt(r[2]) << '\n';
  } else {
    write_csv(a.out, {"maturity", "strike", "price"}, rows);
  }
}

void add_common(CLI::App* sub, Common& c, bool needs_model) {
  if (needs_model) sub->add_option("--model", c.model, "Model JSON file")->required();
  sub->add_option("--out", c.out, "Output file (stdout when omitted)");
  sub->add_option("--seed", c.seed, "Random seed");
  sub->add_option("--threads", c.threads, "Worker threads (0 = all cores; default from RSLEVY_THREADS)");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Regime-switching time-changed Levy option pricing and estimation"};
  app.name("rslevy");
  app.require_subcommand(1, 1);

  const unsigned threads = default_threads();
  PriceArgs price;
  SimulateArgs sim;
  PlotCfArgs plot;
  EstimateArgs est;
  CalibrateArgs cal;
  BsCheckArgs bs;
  SurfaceArgs surf;
  for (Common* c : std::initializer_list<Common*>{&price, &sim, &plot, &est, &cal, &bs, &surf}) c->threads = threads;

  auto* p = app.add_subcommand("price", "Price a contract grid by COS or Monte Carlo");
  add_common(p, price, true);
  p->add_option("--contracts", price.contracts, "Contract CSV (maturity,strike,kind)")->required();
  p->add_option("--method", price.method, "cos or mc")->check(CLI::IsMember({"cos", "mc"}));
  p->add_option("--terms", price.terms, "COS series terms");
  p->add_option("--paths", price.paths, "Monte Carlo paths");
  p->add_option("--dt", price.dt, "Monte Carlo step (years; 0 = one step per sojourn)");

  auto* s = app.add_subcommand("simulate", "Simulate one price path");
  add_common(s, sim, true);
  s->add_option("--horizon", sim.horizon, "Horizon in years");
  s->add_option("--dt", sim.dt, "Step in years");

  auto* c = app.add_subcommand("plot-cf", "Tabulate the characteristic function of log(S_T/S_0)");
  add_common(c, plot, true);
  c->add_option("--horizon", plot.horizon, "Horizon in years");
  c->add_option("--u-min", plot.u_min, "Smallest frequency");
  c->add_option("--u-max", plot.u_max, "Largest frequency");
  c->add_option("--points", plot.points, "Number of frequencies");

  auto* e = app.add_subcommand("estimate", "Estimate per-regime parameters from a price history");
  add_common(e, est, false);
  e->add_option("--prices", est.prices, "Price CSV (date,price)")->required();
  e->add_option("--method", est.method, "mom, mde or mle")->check(CLI::IsMember({"mom", "mde", "mle"}));
  e->add_option("--family", est.family, "gamma or ig");
  e->add_option("--regime-rule", est.rule, "threshold:<c> or windows:<file>");
  e->add_option("--n-sim", est.n_sim, "Simulated increments for mle");
  e->add_option("--clip-floor", est.clip_floor, "Replacement for nonpositive prices");
  e->add_option("--rate", est.r, "Interest rate stored in the output model");

  auto* k = app.add_subcommand("calibrate", "Calibrate regime parameters to option quotes");
  add_common(k, cal, true);
  k->add_option("--quotes", cal.quotes, "Quote CSV (maturity,strike,kind,mid)")->required();
  k->add_option("--market", cal.market, "JSON with s0 and r overriding the model file");
  k->add_option("--config", cal.config, "Calibration settings JSON");

  auto* b = app.add_subcommand("bs-check", "Compare COS and Monte Carlo with Black-Scholes");
  add_common(b, bs, false);
  b->add_option("--paths", bs.paths, "Monte Carlo paths");
  b->add_option("--dt", bs.dt, "Monte Carlo step (years)");

  auto* f = app.add_subcommand("payoff-surface", "Price a maturity-strike grid by COS");
  add_common(f, surf, true);
  f->add_option("--t-min", surf.t_min);
  f->add_option("--t-max", surf.t_max);
  f->add_option("--t-points", surf.t_points);
  f->add_option("--k-min", surf.k_min, "Default 0.5 s0");
  f->add_option("--k-max", surf.k_max, "Default 1.5 s0");
  f->add_option("--k-points", surf.k_points);
  f->add_option("--kind", surf.kind, "call or put");
  f->add_option("--terms", surf.terms, "COS series terms");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& ex) {
    err << "error: " << ex.what() << "\n\n" << app.help();
    return 2;
  }
  cal.seed_given = k->count("--seed") > 0;

  try {
    if (*p) cmd_price(price, out);
    if (*s) cmd_simulate(sim, out);
    if (*c) cmd_plot_cf(plot, out);
    if (*e) cmd_estimate(est, out);
    if (*k) cmd_calibrate(cal, out);
    if (*b) cmd_bs_check(bs, out);
    if (*f) cmd_payoff_surface(surf, out);
  } catch (const DataError& ex) {
    err << "error: " << ex.what() << '\n';
    return 2;
  } catch (const std::invalid_argument& ex) {
    err << "error: " << ex.what() << '\n';
    return 2;
  } catch (const std::exception& ex) {
    err << "error: " << ex.what() << '\n';
    return 1;
  }
  return 0;
}

int run(int argc, char** argv) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run(args, std::cout, std::cerr);
}

}  // namespace rslevy::cli
