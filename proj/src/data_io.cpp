#include "rslevy/data_io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <json.hpp>
#include <sstream>

namespace rslevy {

namespace {

using nlohmann::json;

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    out.push_back(trim(line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

class CsvReader {
 public:
  CsvReader(const std::filesystem::path& path, std::string_view header) : path_(path), in_(path) {
    if (!in_) throw DataError(path_.string() + ": cannot open file");
    std::string line;
    if (!next_line(line)) throw DataError(path_.string() + ": empty file, expected header '" + std::string(header) + "'");
    if (trim(line) != header) {
      throw DataError(fail("expected header '" + std::string(header) + "', found '" + std::string(trim(line)) + "'"));
    }
  }

  // Next non-blank data row, split into fields; false at end of file.
  bool row(std::vector<std::string_view>& fields, std::size_t expected) {
    while (next_line(current_)) {
      if (trim(current_).empty()) continue;
      fields = split(current_);
      if (fields.size() != expected) {
        throw DataError(fail("expected " + std::to_string(expected) + " fields, found " + std::to_string(fields.size())));
      }
      return true;
    }
    return false;
  }

  double number(std::string_view s, const char* what) const {
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v)) {
      throw DataError(fail(std::string("invalid ") + what + " '" + std::string(s) + "'"));
    }
    return v;
  }

  Date date(std::string_view s) const {
    try {
      return parse_date(s);
    } catch (const std::invalid_argument& e) {
      throw DataError(fail(e.what()));
    }
  }

  std::string fail(const std::string& msg) const {
    return path_.string() + ":" + std::to_string(line_no_) + ": " + msg;
  }

 private:
  bool next_line(std::string& line) {
    if (!std::getline(in_, line)) return false;
    ++line_no_;
    return true;
  }

  std::filesystem::path path_;
  std::ifstream in_;
  std::string current_;
  std::size_t line_no_ = 0;
};

json regime_json(const RegimeParams& p) {
  return json{{"mu", p.mu}, {"sigma", p.sigma}, {"alpha", p.alpha}, {"beta", p.beta}};
}

double number_field(const json& obj, const char* key, const std::string& where) {
  if (!obj.contains(key)) throw DataError("model JSON: missing '" + std::string(key) + "' in " + where);
  const json& v = obj.at(key);
  if (!v.is_number()) throw DataError("model JSON: '" + std::string(key) + "' in " + where + " must be a number");
  return v.get<double>();
}

}  // namespace

ReturnSeries log_returns(const PriceSeries& prices, double clip_floor, std::size_t* clipped) {
  if (!(clip_floor > 0.0)) throw std::invalid_argument("clip floor must be > 0");
  if (prices.prices.size() < 2) throw std::invalid_argument("need at least 2 prices");
  if (!prices.dates.empty() && prices.dates.size() != prices.prices.size()) {
    throw std::invalid_argument("dates and prices differ in length");
  }
  std::size_t count = 0;
  std::vector<double> p(prices.prices);
  for (double& v : p) {
    if (!(v > 0.0)) {
      v = clip_floor;
      ++count;
    }
  }
  ReturnSeries out;
  for (std::size_t k = 1; k < p.size(); ++k) {
    out.log_returns.push_back(std::log(p[k] / p[k - 1]));
    if (!prices.dates.empty()) out.dates.push_back(prices.dates[k]);
  }
  if (clipped) *clipped = count;
  return out;
}

LoadedPrices load_prices(const std::filesystem::path& path, double clip_floor) {
  CsvReader csv(path, "date,price");
  LoadedPrices out;
  std::vector<std::string_view> f;
  while (csv.row(f, 2)) {
    const Date d = csv.date(f[0]);
    const double p = csv.number(f[1], "price");
    if (!out.raw.dates.empty() && !(out.raw.dates.back() < d)) {
      throw DataError(csv.fail("dates must be strictly increasing (" + format_date(d) + " after " +
                               format_date(out.raw.dates.back()) + ")"));
    }
    out.raw.dates.push_back(d);
    out.raw.prices.push_back(p);
  }
  if (out.raw.prices.size() < 2) throw DataError(path.string() + ": need at least 2 price rows");
  out.returns = log_returns(out.raw, clip_floor, &out.clipped);
  return out;
}

QuoteTable load_quotes(const std::filesystem::path& path) {
  CsvReader csv(path, "maturity,strike,kind,mid");
  QuoteTable table;
  std::vector<std::string_view> f;
  while (csv.row(f, 4)) {
    Quote q;
    q.maturity = csv.number(f[0], "maturity");
    q.strike = csv.number(f[1], "strike");
    try {
      q.kind = parse_option_kind(f[2]);
      q.mid = csv.number(f[3], "mid");
      table.add(q);
    } catch (const std::invalid_argument& e) {
      throw DataError(csv.fail(e.what()));
    }
  }
  if (table.empty()) throw DataError(path.string() + ": no quotes");
  return table;
}

void save_quotes(const std::filesystem::path& path, const QuoteTable& quotes) {
  std::ostringstream out;
  out << "maturity,strike,kind,mid\n";
  char buf[128];
  for (const auto& q : quotes.rows()) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%s,%.17g\n", q.maturity, q.strike,
                  std::string(to_string(q.kind)).c_str(), q.mid);
    out << buf;
  }
  write_text(path, out.str());
}

std::vector<ContractSpec> load_contracts(const std::filesystem::path& path) {
  CsvReader csv(path, "maturity,strike,kind");
  std::vector<ContractSpec> out;
  std::vector<std::string_view> f;
  while (csv.row(f, 3)) {
    ContractSpec c;
    c.maturity = csv.number(f[0], "maturity");
    c.strike = csv.number(f[1], "strike");
    try {
      c.kind = parse_option_kind(f[2]);
      c.validate();
    } catch (const std::invalid_argument& e) {
      throw DataError(csv.fail(e.what()));
    }
    out.push_back(c);
  }
  if (out.empty()) throw DataError(path.string() + ": no contracts");
  return out;
}

std::vector<std::pair<Date, Date>> load_windows(const std::filesystem::path& path) {
  CsvReader csv(path, "start,end");
  std::vector<std::pair<Date, Date>> out;
  std::vector<std::string_view> f;
  while (csv.row(f, 2)) {
    const Date a = csv.date(f[0]);
    const Date b = csv.date(f[1]);
    if (b < a) throw DataError(csv.fail("window end precedes start"));
    out.emplace_back(a, b);
  }
  return out;
}

std::string model_to_json(const SwitchingModel& model) {
  const json doc{{"family", std::string(to_string(model.family))},
                 {"regimes", json::array({regime_json(model.regimes[0]), regime_json(model.regimes[1])})},
                 {"lambda12", model.lambda12},
                 {"lambda21", model.lambda21},
                 {"s0", model.s0},
                 {"r", model.r}};
  return doc.dump(2) + "\n";
}

SwitchingModel model_from_json(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw DataError(std::string("model JSON: ") + e.what());
  }
  if (!doc.is_object()) throw DataError("model JSON: top level must be an object");
  SwitchingModel m;
  if (!doc.contains("family") || !doc["family"].is_string()) throw DataError("model JSON: missing string 'family'");
  try {
    m.family = parse_family(doc["family"].get<std::string>());
  } catch (const std::invalid_argument& e) {
    throw DataError(std::string("model JSON: ") + e.what());
  }
  if (!doc.contains("regimes") || !doc["regimes"].is_array() || doc["regimes"].size() != 2) {
    throw DataError("model JSON: 'regimes' must be an array of two objects");
  }
  for (std::size_t j = 0; j < 2; ++j) {
    const json& r = doc["regimes"][j];
    const std::string where = "regime " + std::to_string(j + 1);
    if (!r.is_object()) throw DataError("model JSON: " + where + " must be an object");
    m.regimes[j] = {number_field(r, "mu", where), number_field(r, "sigma", where), number_field(r, "alpha", where),
                    number_field(r, "beta", where)};
  }
  m.lambda12 = number_field(doc, "lambda12", "model");
  m.lambda21 = number_field(doc, "lambda21", "model");
  m.s0 = number_field(doc, "s0", "model");
  m.r = number_field(doc, "r", "model");
  try {
    m.validate();
  } catch (const std::invalid_argument& e) {
    throw DataError(std::string("model JSON: ") + e.what());
  }
  const ParamBounds bounds;
  for (int j = 1; j <= 2; ++j) {
    if (!bounds.contains(m.regime(j))) {
      throw DataError("model JSON: regime " + std::to_string(j) + " parameters outside the admissible bounds");
    }
  }
  return m;
}

SwitchingModel load_model(const std::filesystem::path& path) {
  try {
    return model_from_json(read_text(path));
  } catch (const DataError& e) {
    throw DataError(path.string() + ": " + e.what());
  }
}

void save_model(const std::filesystem::path& path, const SwitchingModel& model) { write_text(path, model_to_json(model)); }

void write_csv(const std::filesystem::path& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows) {
  std::ostringstream out;
  for (std::size_t i = 0; i < header.size(); ++i) out << (i ? "," : "") << header[i];
  out << '\n';
  char buf[40];
  for (const auto& row : rows) {
    if (row.size() != header.size()) throw std::invalid_argument("CSV row width differs from header");
    for (std::size_t i = 0; i < row.size(); ++i) {
      std::snprintf(buf, sizeof buf, "%.17g", row[i]);
      out << (i ? "," : "") << buf;
    }
    out << '\n';
  }
  write_text(path, out.str());
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError(path.string() + ": cannot open file");
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void write_text(const std::filesystem::path& path, std::string_view text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError(path.string() + ": cannot open file for writing");
  out << text;
  if (!out) throw DataError(path.string() + ": write failed");
}

}  // namespace rslevy
