#include "adriana/series.hpp"

#include "adriana/error.hpp"

#include <charconv>
#include <cstdio>

namespace adriana {

namespace {

// Howard Hinnant's civil date algorithms.
std::int64_t days_from_civil(int y, int m, int d) {
    y -= m <= 2;
    const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
    const unsigned yoe = static_cast<unsigned>(y - era * 400);
    const unsigned doy = (153u * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
    const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
    return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

void civil_from_days(std::int64_t z, int& y, int& m, int& d) {
    z += 719468;
    const std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
    const unsigned doe = static_cast<unsigned>(z - era * 146097);
    const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
    const std::int64_t yy = static_cast<std::int64_t>(yoe) + era * 400;
    const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
    const unsigned mp = (5 * doy + 2) / 153;
    d = static_cast<int>(doy - (153 * mp + 2) / 5 + 1);
    m = static_cast<int>(mp + (mp < 10 ? 3 : -9));
    y = static_cast<int>(yy + (m <= 2));
}

int parse_int_strict(const std::string& s, std::size_t begin, std::size_t end) {
    int value = 0;
    auto [ptr, ec] = std::from_chars(s.data() + begin, s.data() + end, value);
    if (ec != std::errc() || ptr != s.data() + end)
        throw Error(ErrorCode::MalformedHeader, "bad date component in '" + s + "'");
    return value;
}

} // namespace

Date Date::from_ymd(int year, int month, int day) {
    return Date(days_from_civil(year, month, day));
}

std::string Date::to_iso() const {
    int y, m, d;
    civil_from_days(days_, y, m, d);
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%04d-%02d-%02d", y, m, d);
    return buf;
}

Date Date::parse_mdy(const std::string& text) {
    const auto slash1 = text.find('/');
    const auto slash2 = text.find('/', slash1 == std::string::npos ? 0 : slash1 + 1);
    if (slash1 == std::string::npos || slash2 == std::string::npos)
        throw Error(ErrorCode::MalformedHeader, "expected M/D/YY date, got '" + text + "'");
    const int month = parse_int_strict(text, 0, slash1);
    const int day = parse_int_strict(text, slash1 + 1, slash2);
    int year = parse_int_strict(text, slash2 + 1, text.size());
    if (year < 100) year += 2000;
    if (month < 1 || month > 12 || day < 1 || day > 31)
        throw Error(ErrorCode::MalformedHeader, "date out of range: '" + text + "'");
    return from_ymd(year, month, day);
}

const char* to_string(SeriesKind kind) {
    switch (kind) {
    case SeriesKind::Confirmed: return "confirmed";
    case SeriesKind::Recovered: return "recovered";
    case SeriesKind::Death: return "death";
    }
    return "unknown";
}

} // namespace adriana
