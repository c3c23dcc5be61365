#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>

namespace fincast {

/// Calendar date (proleptic Gregorian). Value type, totally ordered.
struct Date {
    int year = 1970;
    int month = 1;  // 1..12
    int day = 1;    // 1..31

    auto operator<=>(const Date&) const = default;

    /// Parses "YYYY-MM-DD". Throws ParseError on malformed input.
    static Date parse_iso(std::string_view text);

    /// January 1 of the given year.
    static Date year_start(int year) { return Date{year, 1, 1}; }

    std::string to_string() const;  // ISO "YYYY-MM-DD"

    /// Days since 1970-01-01 (civil-calendar conversion, exact for all years).
    std::int64_t to_days() const;
    static Date from_days(std::int64_t days);
    Date plus_days(std::int64_t n) const { return from_days(to_days() + n); }
};

}  // namespace fincast
