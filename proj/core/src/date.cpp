#include "fincast/date.hpp"

#include <cstdio>

#include "fincast/errors.hpp"

namespace fincast {

namespace {

bool is_leap(int y) { return (y % 4 == 0 && y % 100 != 0) || y % 400 == 0; }

int days_in_month(int y, int m) {
    static const int kDays[] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
    if (m == 2 && is_leap(y)) return 29;
    return kDays[m - 1];
}

int parse_int(std::string_view s, std::string_view what) {
    if (s.empty()) throw ParseError("empty " + std::string(what) + " field in date");
    int v = 0;
    for (char ch : s) {
        if (ch < '0' || ch > '9') throw ParseError("non-digit in date field: " + std::string(s));
        v = v * 10 + (ch - '0');
    }
    return v;
}

}  // namespace

Date Date::parse_iso(std::string_view text) {
    if (text.size() != 10 || text[4] != '-' || text[7] != '-')
        throw ParseError("date not in YYYY-MM-DD form: " + std::string(text));
    Date d;
    d.year = parse_int(text.substr(0, 4), "year");
    d.month = parse_int(text.substr(5, 2), "month");
    d.day = parse_int(text.substr(8, 2), "day");
    if (d.month < 1 || d.month > 12) throw ParseError("month out of range: " + std::string(text));
    if (d.day < 1 || d.day > days_in_month(d.year, d.month))
        throw ParseError("day out of range: " + std::string(text));
    return d;
}

std::string Date::to_string() const {
    char buf[16];
    std::snprintf(buf, sizeof buf, "%04d-%02d-%02d", year, month, day);
    return buf;
}

// Civil-calendar <-> serial-day conversions; exact over the full int range.
std::int64_t Date::to_days() const {
    std::int64_t y = year;
    const int m = month;
    const int d = day;
    y -= m <= 2;
    const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
    const unsigned yoe = static_cast<unsigned>(y - era * 400);
    const unsigned doy = (153u * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
    const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
    return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

Date Date::from_days(std::int64_t days) {
    days += 719468;
    const std::int64_t era = (days >= 0 ? days : days - 146096) / 146097;
    const unsigned doe = static_cast<unsigned>(days - era * 146097);
    const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
    const std::int64_t y = static_cast<std::int64_t>(yoe) + era * 400;
    const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
    const unsigned mp = (5 * doy + 2) / 153;
    const unsigned d = doy - (153 * mp + 2) / 5 + 1;
    const unsigned m = mp + (mp < 10 ? 3 : -9);
    return Date{static_cast<int>(y + (m <= 2)), static_cast<int>(m), static_cast<int>(d)};
}

}  // namespace fincast
