#include "adriana/data_ingest.hpp"

#include "adriana/error.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <sstream>

namespace adriana {

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> cells;
    std::string cell;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    cell += '"';
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                cell += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            cells.push_back(std::move(cell));
            cell.clear();
        } else if (c != '\r') {
            cell += c;
        }
    }
    cells.push_back(std::move(cell));
    return cells;
}

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

std::int64_t parse_count(const std::string& cell, std::size_t row, std::size_t col) {
    // upstream files occasionally carry counts as "123.0"
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), value);
    if (ec != std::errc() || ptr != cell.data() + cell.size())
        throw Error(ErrorCode::NonNumericCount,
                    "row " + std::to_string(row) + ", column " + std::to_string(col) +
                        ": '" + cell + "'");
    return static_cast<std::int64_t>(value);
}

} // namespace

std::vector<CumulativeSeries> parse_jhu_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line))
        throw Error(ErrorCode::EmptyDocument, "no header line");
    const auto header = split_csv_line(line);
    if (header.size() < 5 || header[0] != "Province/State" || header[1] != "Country/Region" ||
        header[2] != "Lat" || header[3] != "Long")
        throw Error(ErrorCode::MalformedHeader,
                    "expected Province/State,Country/Region,Lat,Long header");

    std::vector<Date> dates;
    dates.reserve(header.size() - 4);
    for (std::size_t i = 4; i < header.size(); ++i) dates.push_back(Date::parse_mdy(header[i]));
    for (std::size_t i = 1; i < dates.size(); ++i)
        if (dates[i].days_since_epoch() != dates[i - 1].days_since_epoch() + 1)
            throw Error(ErrorCode::DateGap, "non-consecutive date columns at index " +
                                                std::to_string(i));

    std::vector<CumulativeSeries> out;
    std::size_t row_number = 1;
    while (std::getline(in, line)) {
        ++row_number;
        if (line.empty() || line == "\r") continue;
        const auto cells = split_csv_line(line);
        if (cells.size() != header.size())
            throw Error(ErrorCode::RaggedRow,
                        "row " + std::to_string(row_number) + " has " +
                            std::to_string(cells.size()) + " cells, header has " +
                            std::to_string(header.size()));
        CumulativeSeries series;
        series.country = cells[1];
        series.region_name = cells[0].empty() ? cells[1] : cells[0] + ", " + cells[1];
        series.start_date = dates.front();
        series.values.reserve(dates.size());
        for (std::size_t i = 4; i < cells.size(); ++i)
            series.values.push_back(parse_count(cells[i], row_number, i));
        out.push_back(std::move(series));
    }
    if (out.empty()) throw Error(ErrorCode::EmptyDocument, "header-only document");
    return out;
}

CumulativeSeries select_country(const std::vector<CumulativeSeries>& series_list,
                                const std::string& name) {
    const std::string wanted = lower(name);
    CumulativeSeries result;
    bool found = false;
    for (const auto& series : series_list) {
        if (lower(series.country) != wanted) continue;
        if (!found) {
            result = series;
            result.region_name = name;
            found = true;
        } else {
            if (series.values.size() != result.values.size())
                throw Error(ErrorCode::RaggedRow, "province rows differ in length for " + name);
            for (std::size_t i = 0; i < series.values.size(); ++i)
                result.values[i] += series.values[i];
        }
    }
    if (!found) throw Error(ErrorCode::CountryNotFound, name);
    return result;
}

DailyResult to_daily(const CumulativeSeries& cumulative, SeriesKind kind) {
    DailyResult result;
    result.series.region_name = cumulative.region_name;
    result.series.kind = kind;
    result.series.start_date = cumulative.start_date;
    result.series.values.reserve(cumulative.values.size());
    for (std::size_t i = 0; i < cumulative.values.size(); ++i) {
        const double daily =
            i == 0 ? static_cast<double>(cumulative.values[0])
                   : static_cast<double>(cumulative.values[i] - cumulative.values[i - 1]);
        if (daily < 0.0) result.negative_days.push_back(i);
        result.series.values.push_back(daily);
    }
    return result;
}

CumulativeSeries truncate_at(const CumulativeSeries& series, Date last) {
    const std::int64_t keep = last.days_since_epoch() - series.start_date.days_since_epoch() + 1;
    CumulativeSeries out = series;
    if (keep < static_cast<std::int64_t>(series.values.size())) {
        if (keep < 2) throw Error(ErrorCode::SeriesTooShort, "truncation leaves < 2 points");
        out.values.resize(static_cast<std::size_t>(keep));
    }
    return out;
}

std::string to_canonical_csv(const DailySeries& series) {
    std::ostringstream out;
    out << "date,value\n";
    out.precision(17);
    for (std::size_t i = 0; i < series.values.size(); ++i)
        out << series.start_date.plus_days(static_cast<std::int64_t>(i)).to_iso() << ','
            << series.values[i] << '\n';
    return out.str();
}

DailySeries parse_canonical_csv(const std::string& text, SeriesKind kind,
                                const std::string& region_name) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line) || line.rfind("date,value", 0) != 0)
        throw Error(ErrorCode::MalformedHeader, "expected 'date,value' header");
    DailySeries series;
    series.kind = kind;
    series.region_name = region_name;
    bool first = true;
    Date prev;
    while (std::getline(in, line)) {
        if (line.empty() || line == "\r") continue;
        const auto comma = line.find(',');
        if (comma == std::string::npos) throw Error(ErrorCode::RaggedRow, line);
        const std::string date_text = line.substr(0, comma);
        int y = 0, m = 0, d = 0;
        if (std::sscanf(date_text.c_str(), "%d-%d-%d", &y, &m, &d) != 3)
            throw Error(ErrorCode::MalformedHeader, "bad ISO date '" + date_text + "'");
        const Date date = Date::from_ymd(y, m, d);
        if (first) {
            series.start_date = date;
            first = false;
        } else if (date.days_since_epoch() != prev.days_since_epoch() + 1) {
            throw Error(ErrorCode::DateGap, date_text);
        }
        prev = date;
        double value = 0.0;
        const std::string cell = line.substr(comma + 1);
        auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), value);
        if (ec != std::errc())
            throw Error(ErrorCode::NonNumericCount, cell);
        series.values.push_back(value);
    }
    if (series.values.empty()) throw Error(ErrorCode::EmptyDocument, "no data rows");
    return series;
}

} // namespace adriana
