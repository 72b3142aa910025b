#pragma once

#include <chrono>
#include <string>
#include <string_view>

namespace winprob {

using Date = std::chrono::year_month_day;

/// Parses strict ISO-8601 `YYYY-MM-DD`; throws std::invalid_argument otherwise.
Date parse_date(std::string_view s);
std::string format_date(const Date& d);

Date add_days(const Date& d, int days);

}  // namespace winprob
