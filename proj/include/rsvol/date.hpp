#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>

namespace rsvol {

/// Calendar date stored as a serial day count (days since 1970-01-01,
/// proleptic Gregorian). Cheap to compare, hash and subtract; quote dates
/// and regime-switch boundaries are plain civil dates with no time zone.
struct Date {
    std::int32_t serial = 0;

    static Date from_ymd(int year, int month, int day);

    /// Parses strict ISO-8601 "YYYY-MM-DD"; throws DataError otherwise.
    static Date parse(std::string_view iso);

    std::string to_string() const;

    int year() const;
    int month() const;
    int day() const;

    Date plus_days(std::int32_t n) const { return Date{serial + n}; }

    auto operator<=>(const Date&) const = default;
};

/// ACT/365 year fraction between two dates.
inline double year_fraction(Date from, Date to)
{
    return (to.serial - from.serial) / 365.0;
}

/// Date reached from `from` after `yf` years under ACT/365 (rounded to days).
Date add_year_fraction(Date from, double yf);

} // namespace rsvol
