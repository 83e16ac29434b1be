#pragma once

#include "adriana/series.hpp"

#include <string>
#include <vector>

namespace adriana {

/// Parses a JHU-CSSE global time-series document. The header must begin
/// `Province/State,Country/Region,Lat,Long` followed by M/D/YY date
/// columns; every data row must have the same number of cells.
std::vector<CumulativeSeries> parse_jhu_csv(const std::string& text);

/// Case-insensitive country selection; province rows for the same country
/// are aggregated by element-wise sum.
CumulativeSeries select_country(const std::vector<CumulativeSeries>& series_list,
                                const std::string& name);

struct DailyResult {
    DailySeries series;
    /// Indices where the daily value came out negative (upstream
    /// corrections); values pass through unclamped.
    std::vector<std::size_t> negative_days;
};

/// daily[0] = cumulative[0]; daily[n] = cumulative[n] - cumulative[n-1].
DailyResult to_daily(const CumulativeSeries& cumulative, SeriesKind kind);

/// Keeps only values dated on or before `last` (inclusive).
CumulativeSeries truncate_at(const CumulativeSeries& series, Date last);

/// Canonical internal form: "date,value" rows with ISO-8601 dates.
std::string to_canonical_csv(const DailySeries& series);
DailySeries parse_canonical_csv(const std::string& text, SeriesKind kind,
                                const std::string& region_name);

} // namespace adriana
