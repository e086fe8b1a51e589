#include "toolweave/calendar_date.hpp"

#include <algorithm>
#include <array>
#include <cstdio>
#include <stdexcept>

#include "toolweave/util.hpp"

namespace toolweave {

namespace {

constexpr std::array<const char*, 7> kWeekdays = {
    "Sunday", "Monday", "Tuesday", "Wednesday", "Thursday", "Friday", "Saturday"};

constexpr std::array<const char*, 12> kMonths = {
    "January", "February", "March",     "April",   "May",      "June",
    "July",    "August",   "September", "October", "November", "December"};

}  // namespace

bool is_leap_year(int year) {
    return (year % 4 == 0 && year % 100 != 0) || year % 400 == 0;
}

int days_in_month(int year, int month) {
    static constexpr std::array<int, 12> lengths = {31, 28, 31, 30, 31, 30,
                                                    31, 31, 30, 31, 30, 31};
    if (month < 1 || month > 12) throw std::domain_error("month out of range");
    if (month == 2 && is_leap_year(year)) return 29;
    return lengths[static_cast<size_t>(month - 1)];
}

bool Date::valid(int y, int m, int d) {
    return m >= 1 && m <= 12 && d >= 1 && d <= days_in_month(y, m);
}

std::optional<Date> Date::from_iso(std::string_view s) {
    if (s.size() != 10 || s[4] != '-' || s[7] != '-') return std::nullopt;
    for (size_t i : {0u, 1u, 2u, 3u, 5u, 6u, 8u, 9u})
        if (!is_ascii_digit(s[i])) return std::nullopt;
    auto num = [&](size_t b, size_t n) {
        int v = 0;
        for (size_t i = b; i < b + n; ++i) v = v * 10 + (s[i] - '0');
        return v;
    };
    int y = num(0, 4), m = num(5, 2), d = num(8, 2);
    if (!valid(y, m, d)) return std::nullopt;
    return Date{y, m, d};
}

std::string Date::iso() const {
    char buf[16];
    std::snprintf(buf, sizeof buf, "%04d-%02d-%02d", year, month, day);
    return buf;
}

// Civil-from-days / days-from-civil via the standard era decomposition
// (400-year cycles of 146097 days), exact over the full proleptic range.
int64_t days_from_civil(const Date& d) {
    int y = d.year - (d.month <= 2 ? 1 : 0);
    const int64_t era = (y >= 0 ? y : y - 399) / 400;
    const int64_t yoe = y - era * 400;
    const int64_t doy = (153 * (d.month + (d.month > 2 ? -3 : 9)) + 2) / 5 + d.day - 1;
    const int64_t doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
    return era * 146097 + doe - 719468;
}

Date civil_from_days(int64_t days) {
    const int64_t z = days + 719468;
    const int64_t era = (z >= 0 ? z : z - 146096) / 146097;
    const int64_t doe = z - era * 146097;
    const int64_t yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
    const int64_t y = yoe + era * 400;
    const int64_t doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
    const int64_t mp = (5 * doy + 2) / 153;
    const int64_t d = doy - (153 * mp + 2) / 5 + 1;
    const int64_t m = mp + (mp < 10 ? 3 : -9);
    return Date{static_cast<int>(y + (m <= 2 ? 1 : 0)), static_cast<int>(m),
                static_cast<int>(d)};
}

int weekday_index(const Date& d) {
    // 1970-01-01 was a Thursday.
    const int64_t days = days_from_civil(d);
    return static_cast<int>(((days % 7) + 7 + 4) % 7);
}

std::string weekday_name(const Date& d) {
    return kWeekdays[static_cast<size_t>(weekday_index(d))];
}

std::string month_name(int month) {
    if (month < 1 || month > 12) throw std::domain_error("month out of range");
    return kMonths[static_cast<size_t>(month - 1)];
}

Date add_days(const Date& d, int64_t delta) {
    return civil_from_days(days_from_civil(d) + delta);
}

Date add_months_clamped(const Date& d, int delta) {
    int64_t linear = static_cast<int64_t>(d.year) * 12 + (d.month - 1) + delta;
    int64_t y = linear >= 0 ? linear / 12 : (linear - 11) / 12;
    int m = static_cast<int>(linear - y * 12) + 1;
    int day = std::min(d.day, days_in_month(static_cast<int>(y), m));
    return Date{static_cast<int>(y), m, day};
}

Date add_years_clamped(const Date& d, int delta) {
    int y = d.year + delta;
    return Date{y, d.month, std::min(d.day, days_in_month(y, d.month))};
}

int64_t whole_month_diff(const Date& from, const Date& to) {
    if (to < from) throw std::invalid_argument("whole_month_diff: to precedes from");
    int64_t months = static_cast<int64_t>(to.year - from.year) * 12 + (to.month - from.month);
    if (to.day < from.day) --months;
    return months;
}

int64_t whole_year_diff(const Date& from, const Date& to) {
    if (to < from) throw std::invalid_argument("whole_year_diff: to precedes from");
    int64_t years = to.year - from.year;
    if (to.month < from.month || (to.month == from.month && to.day < from.day)) --years;
    return years;
}

std::string long_date(const Date& d) {
    return month_name(d.month) + " " + std::to_string(d.day) + ", " + std::to_string(d.year);
}

std::string calendar_line(const Date& d) {
    return "Today is " + weekday_name(d) + ", " + long_date(d) + ".";
}

}  // namespace toolweave
