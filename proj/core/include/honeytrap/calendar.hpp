#pragma once

#include <chrono>
#include <string>
#include <string_view>

namespace honeytrap {

using Date = std::chrono::sys_days;

/// Parses an ISO `YYYY-MM-DD` date; throws ParseError on anything else.
[[nodiscard]] Date parse_date(std::string_view text);

[[nodiscard]] std::string format_date(Date date);

/// Days since 1970-01-01.
[[nodiscard]] inline long epoch_day(Date date) {
    return static_cast<long>(date.time_since_epoch().count());
}

}  // namespace honeytrap
