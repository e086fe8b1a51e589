#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace toolweave {

// Proleptic Gregorian calendar date.
struct Date {
    int year = 1970;
    int month = 1;  // 1..12
    int day = 1;    // 1..31

    static bool valid(int y, int m, int d);
    static std::optional<Date> from_iso(std::string_view s);  // "2017-03-09"
    std::string iso() const;

    friend bool operator==(const Date& a, const Date& b) {
        return a.year == b.year && a.month == b.month && a.day == b.day;
    }
    friend bool operator<(const Date& a, const Date& b) {
        if (a.year != b.year) return a.year < b.year;
        if (a.month != b.month) return a.month < b.month;
        return a.day < b.day;
    }
};

bool is_leap_year(int year);
int days_in_month(int year, int month);

// Days since 1970-01-01 (negative before).
int64_t days_from_civil(const Date& d);
Date civil_from_days(int64_t days);

// 0 = Sunday .. 6 = Saturday.
int weekday_index(const Date& d);
std::string weekday_name(const Date& d);
std::string month_name(int month);

Date add_days(const Date& d, int64_t delta);
// Month/year arithmetic clamps the day to the target month's length.
Date add_months_clamped(const Date& d, int delta);
Date add_years_clamped(const Date& d, int delta);

// Whole calendar units elapsed from `from` to `to` (from <= to): the month
// count decrements when `to` has not yet reached `from`'s day of month, and
// likewise for years against (month, day).
int64_t whole_month_diff(const Date& from, const Date& to);
int64_t whole_year_diff(const Date& from, const Date& to);

// "January 30, 2023" — month name, unpadded day, year.
std::string long_date(const Date& d);
// "Today is Monday, January 30, 2023."
std::string calendar_line(const Date& d);

}  // namespace toolweave
