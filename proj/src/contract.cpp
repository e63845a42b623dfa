#include "rslevy/contract.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <stdexcept>
#include <string>

namespace rslevy {

std::string_view to_string(OptionKind kind) { return kind == OptionKind::Call ? "call" : "put"; }

OptionKind parse_option_kind(std::string_view text) {
  std::string key(text);
  std::transform(key.begin(), key.end(), key.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (key == "call" || key == "c") return OptionKind::Call;
  if (key == "put" || key == "p") return OptionKind::Put;
  throw std::invalid_argument("unknown option kind '" + std::string(text) + "'");
}

void ContractSpec::validate() const {
  if (!(std::isfinite(strike) && strike > 0.0)) throw std::invalid_argument("strike must be > 0");
  if (!(std::isfinite(maturity) && maturity > 0.0)) throw std::invalid_argument("maturity must be > 0");
}

double payoff(const ContractSpec& contract, double s_t) {
  return contract.kind == OptionKind::Call ? std::max(s_t - contract.strike, 0.0)
                                           : std::max(contract.strike - s_t, 0.0);
}

}  // namespace rslevy
