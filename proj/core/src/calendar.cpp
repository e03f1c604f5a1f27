#include "honeytrap/calendar.hpp"

#include <charconv>

#include <fmt/format.h>

#include "honeytrap/errors.hpp"

namespace honeytrap {

namespace {

int parse_field(std::string_view text, std::string_view whole) {
    int value = 0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size()) {
        throw ParseError(fmt::format("invalid date '{}', expected YYYY-MM-DD", whole), 0);
    }
    return value;
}

}  // namespace

Date parse_date(std::string_view text) {
    if (text.size() != 10 || text[4] != '-' || text[7] != '-') {
        throw ParseError(fmt::format("invalid date '{}', expected YYYY-MM-DD", text), 0);
    }
    const int y = parse_field(text.substr(0, 4), text);
    const int m = parse_field(text.substr(5, 2), text);
    const int d = parse_field(text.substr(8, 2), text);
    const std::chrono::year_month_day ymd{std::chrono::year{y},
                                          std::chrono::month{static_cast<unsigned>(m)},
                                          std::chrono::day{static_cast<unsigned>(d)}};
    if (!ymd.ok()) {
        throw ParseError(fmt::format("invalid calendar date '{}'", text), 0);
    }
    return Date{ymd};
}

std::string format_date(Date date) {
    const std::chrono::year_month_day ymd{date};
    return fmt::format("{:04d}-{:02d}-{:02d}", static_cast<int>(ymd.year()),
                       static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()));
}

}  // namespace honeytrap
