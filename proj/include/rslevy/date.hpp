#pragma once

#include <chrono>
#include <string>
#include <string_view>

namespace rslevy {

using Date = std::chrono::year_month_day;

/// Parses an ISO-8601 calendar date "YYYY-MM-DD"; throws std::invalid_argument.
Date parse_date(std::string_view text);
std::string format_date(const Date& date);

}  // namespace rslevy
