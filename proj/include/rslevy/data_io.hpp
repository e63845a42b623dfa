#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "rslevy/calibration.hpp"
#include "rslevy/date.hpp"
#include "rslevy/estimation.hpp"
#include "rslevy/regime_model.hpp"

namespace rslevy {

/// Raised for malformed input files; the message carries the path and line.
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct PriceSeries {
  std::vector<Date> dates;
  std::vector<double> prices;
};

struct LoadedPrices {
  PriceSeries raw;
  ReturnSeries returns;
  std::size_t clipped = 0;  ///< nonpositive prices replaced by the floor
};

/// Log-returns after replacing nonpositive prices with `clip_floor`.
ReturnSeries log_returns(const PriceSeries& prices, double clip_floor = 0.01, std::size_t* clipped = nullptr);

/// CSV with header "date,price"; dates strictly increasing; at least 2 rows.
LoadedPrices load_prices(const std::filesystem::path& path, double clip_floor = 0.01);

/// CSV with header "maturity,strike,kind,mid".
QuoteTable load_quotes(const std::filesystem::path& path);
void save_quotes(const std::filesystem::path& path, const QuoteTable& quotes);

/// CSV with header "maturity,strike,kind".
std::vector<ContractSpec> load_contracts(const std::filesystem::path& path);

/// CSV with header "start,end" of inclusive ISO date windows.
std::vector<std::pair<Date, Date>> load_windows(const std::filesystem::path& path);

/// JSON model document:
/// {"family": "gamma"|"ig"|"identity",
///  "regimes": [{"mu":..,"sigma":..,"alpha":..,"beta":..}, {...}],
///  "lambda12": .., "lambda21": .., "s0": .., "r": ..}
std::string model_to_json(const SwitchingModel& model);
/// Validates the schema, the model and the default ParamBounds.
SwitchingModel model_from_json(std::string_view text);
SwitchingModel load_model(const std::filesystem::path& path);
void save_model(const std::filesystem::path& path, const SwitchingModel& model);

/// Writes a header line and rows with round-trip precision.
void write_csv(const std::filesystem::path& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows);

std::string read_text(const std::filesystem::path& path);
void write_text(const std::filesystem::path& path, std::string_view text);

}  // namespace rslevy
