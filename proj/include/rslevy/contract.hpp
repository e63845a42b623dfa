#pragma once

#include <string_view>

namespace rslevy {

enum class OptionKind { Call, Put };

std::string_view to_string(OptionKind kind);
/// Accepts "call"/"c" and "put"/"p", case-insensitive.
OptionKind parse_option_kind(std::string_view text);

struct ContractSpec {
  double strike = 1.0;
  double maturity = 1.0;
  OptionKind kind = OptionKind::Call;

  /// Throws std::invalid_argument unless strike > 0 and maturity > 0.
  void validate() const;
};

/// Undiscounted payoff at maturity for terminal price s_t.
double payoff(const ContractSpec& contract, double s_t);

}  // namespace rslevy
