#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace adriana {

/// Calendar date stored as days since 1970-01-01 (proleptic Gregorian).
class Date {
public:
    Date() = default;
    explicit Date(std::int64_t days_since_epoch) : days_(days_since_epoch) {}
    static Date from_ymd(int year, int month, int day);

    std::int64_t days_since_epoch() const { return days_; }
    Date next() const { return Date(days_ + 1); }
    Date plus_days(std::int64_t n) const { return Date(days_ + n); }

    /// ISO-8601, e.g. "2020-01-22".
    std::string to_iso() const;

    /// Parses the JHU header format "M/D/YY" (also accepts 4-digit years).
    static Date parse_mdy(const std::string& text);

    friend auto operator<=>(const Date&, const Date&) = default;

private:
    std::int64_t days_ = 0;
};

enum class SeriesKind { Confirmed, Recovered, Death };

const char* to_string(SeriesKind kind);

/// Cumulative counts, one per consecutive day.
struct CumulativeSeries {
    std::string region_name;
    Date start_date;
    std::vector<std::int64_t> values;

    /// Country field from the source row, kept for selection; region_name
    /// may additionally carry a province prefix.
    std::string country;
};

/// Daily instances derived from a cumulative series.
struct DailySeries {
    std::string region_name;
    SeriesKind kind = SeriesKind::Confirmed;
    Date start_date;
    std::vector<double> values;
};

} // namespace adriana
