#include "rsvol/date.hpp"

#include <cmath>
#include <cstdio>

#include "rsvol/errors.hpp"

namespace rsvol {
namespace {

// Civil <-> serial conversion (Howard Hinnant's algorithms, public domain).
std::int32_t days_from_civil(int y, int m, int d)
{
    y -= m <= 2;
    const int era = (y >= 0 ? y : y - 399) / 400;
    const unsigned yoe = static_cast<unsigned>(y - era * 400);
    const unsigned doy = (153u * static_cast<unsigned>(m + (m > 2 ? -3 : 9)) + 2u) / 5u
                         + static_cast<unsigned>(d) - 1u;
    const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
    return era * 146097 + static_cast<int>(doe) - 719468;
}

void civil_from_days(std::int32_t z, int& y, int& m, int& d)
{
    z += 719468;
    const int era = (z >= 0 ? z : z - 146096) / 146097;
    const unsigned doe = static_cast<unsigned>(z - era * 146097);
    const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
    y = static_cast<int>(yoe) + era * 400;
    const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
    const unsigned mp = (5 * doy + 2) / 153;
    d = static_cast<int>(doy - (153 * mp + 2) / 5 + 1);
    m = static_cast<int>(mp + (mp < 10 ? 3 : -9));
    y += m <= 2;
}

bool valid_ymd(int y, int m, int d)
{
    if (m < 1 || m > 12 || d < 1)
        return false;
    static constexpr int lengths[] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
    int len = lengths[m - 1];
    const bool leap = (y % 4 == 0 && y % 100 != 0) || y % 400 == 0;
    if (m == 2 && leap)
        len = 29;
    return d <= len;
}

} // namespace

Date Date::from_ymd(int year, int month, int day)
{
    if (!valid_ymd(year, month, day))
        throw DataError("invalid calendar date " + std::to_string(year) + "-"
                        + std::to_string(month) + "-" + std::to_string(day));
    return Date{days_from_civil(year, month, day)};
}

Date Date::parse(std::string_view iso)
{
    int y = 0, m = 0, d = 0;
    char tail = 0;
    const std::string s(iso);
    if (s.size() != 10
        || std::sscanf(s.c_str(), "%4d-%2d-%2d%c", &y, &m, &d, &tail) != 3)
        throw DataError("bad date '" + s + "': expected YYYY-MM-DD");
    return from_ymd(y, m, d);
}

std::string Date::to_string() const
{
    int y, m, d;
    civil_from_days(serial, y, m, d);
    char buf[16];
    std::snprintf(buf, sizeof buf, "%04d-%02d-%02d", y, m, d);
    return buf;
}

int Date::year() const
{
    int y, m, d;
    civil_from_days(serial, y, m, d);
    return y;
}

int Date::month() const
{
    int y, m, d;
    civil_from_days(serial, y, m, d);
    return m;
}

int Date::day() const
{
    int y, m, d;
    civil_from_days(serial, y, m, d);
    return d;
}

Date add_year_fraction(Date from, double yf)
{
    return from.plus_days(static_cast<std::int32_t>(std::llround(yf * 365.0)));
}

} // namespace rsvol
