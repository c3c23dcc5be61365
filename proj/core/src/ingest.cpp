#include "fincast/ingest.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <map>
#include <optional>
#include <sstream>
#include <vector>

#include <json.hpp>

#include "fincast/errors.hpp"
#include "http_client.hpp"

namespace fincast::ingest {

namespace {

using nlohmann::json;

long read_page_count(const json& meta) {
    if (!meta.contains("pages")) return 1;
    const auto& pages = meta["pages"];
    if (pages.is_number()) return pages.get<long>();
    if (pages.is_string()) return std::strtol(pages.get<std::string>().c_str(), nullptr, 10);
    return 1;
}

std::string trim(std::string s) {
    const auto is_space = [](unsigned char c) { return std::isspace(c) != 0; };
    while (!s.empty() && is_space(s.back())) s.pop_back();
    std::size_t i = 0;
    while (i < s.size() && is_space(s[i])) ++i;
    return s.substr(i);
}

bool is_missing_field(const std::string& field) {
    if (field.empty()) return true;
    std::string lower;
    for (char c : field) lower += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return lower == "null" || lower == "nan";
}

double parse_number(const std::string& field, const std::string& where) {
    char* end = nullptr;
    const double v = std::strtod(field.c_str(), &end);
    if (end == field.c_str() || *end != '\0')
        throw ParseError("unparseable number '" + field + "' in " + where);
    return v;
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            fields.push_back(trim(cur));
            cur.clear();
        } else {
            cur += c;
        }
    }
    fields.push_back(trim(cur));
    return fields;
}

}  // namespace

std::string fetch_worldbank_series(const std::string& country_code, const std::string& indicator,
                                   const FetchOptions& options) {
    if (country_code.empty()) throw ParseError("fetch_worldbank_series: empty country code");
    if (indicator.empty()) throw ParseError("fetch_worldbank_series: empty indicator");
    const std::string url = options.base_url + "/v2/country/" + country_code + "/indicator/" +
                            indicator + "?format=json&per_page=20000";
    const auto res = detail::http_get(url, options.timeout);
    if (res.status != 200) throw HttpStatusError(res.status, url);
    return res.body;
}

DatedSeries parse_worldbank_json(const std::string& body) {
    json doc;
    try {
        doc = json::parse(body);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("world bank response is not valid JSON: ") + e.what());
    }
    if (!doc.is_array() || doc.empty())
        throw ParseError("world bank response is not the expected top-level array");
    if (!doc[0].is_object())
        throw ParseError("world bank response lacks the pagination metadata object");
    if (read_page_count(doc[0]) > 1)
        throw ParseError("world bank response is paginated; increase per_page");
    if (doc.size() < 2 || !doc[1].is_array() || doc[1].empty())
        throw NoData("world bank response carries no data points");

    std::vector<DatedPoint> points;
    for (const auto& entry : doc[1]) {
        if (!entry.is_object() || !entry.contains("date") || !entry.contains("value"))
            throw ParseError("world bank entry missing date or value");
        if (entry["value"].is_null()) continue;  // missing observation: dropped
        if (!entry["value"].is_number())
            throw ParseError("world bank value is neither number nor null");
        const std::string date_str = entry["date"].is_string()
            ? entry["date"].get<std::string>()
            : std::to_string(entry["date"].get<long>());
        char* end = nullptr;
        const long year = std::strtol(date_str.c_str(), &end, 10);
        if (end == date_str.c_str() || *end != '\0')
            throw ParseError("world bank date is not a year: " + date_str);
        points.push_back({Date::year_start(static_cast<int>(year)), entry["value"].get<double>()});
    }
    if (points.empty()) throw NoData("world bank response has only null values");

    std::sort(points.begin(), points.end(),
              [](const DatedPoint& a, const DatedPoint& b) { return a.date < b.date; });
    for (std::size_t i = 1; i < points.size(); ++i)
        if (!(points[i - 1].date < points[i].date))
            throw ParseError("world bank response repeats year " + points[i].date.to_string());
    return DatedSeries(std::move(points));
}

OhlcvSeries parse_yahoo_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line)) throw ParseError("csv is empty");
    if (!line.empty() && line.back() == '\r') line.pop_back();

    const auto header = split_csv_line(line);
    std::map<std::string, std::size_t> columns;
    for (std::size_t i = 0; i < header.size(); ++i) columns[header[i]] = i;
    if (!columns.count("Date") || !columns.count("Close"))
        throw ParseError("csv header must contain Date and Close columns");

    const auto field_of = [&](const std::vector<std::string>& fields,
                              const std::string& name) -> std::optional<std::string> {
        const auto it = columns.find(name);
        if (it == columns.end() || it->second >= fields.size()) return std::nullopt;
        return fields[it->second];
    };

    std::vector<OhlcvRow> rows;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (trim(line).empty()) continue;
        const auto fields = split_csv_line(line);
        const std::string where = "csv line " + std::to_string(line_no);

        const auto date_field = field_of(fields, "Date");
        if (!date_field || date_field->empty())
            throw ParseError("missing date in " + where);

        // Any empty/"null" numeric field disqualifies the row.
        bool missing = false;
        const auto numeric = [&](const std::string& name,
                                 double fallback) -> double {
            const auto f = field_of(fields, name);
            if (!f) return fallback;
            if (is_missing_field(*f)) {
                missing = true;
                return fallback;
            }
            return parse_number(*f, where);
        };

        const auto close_field = field_of(fields, "Close");
        if (!close_field) throw ParseError("missing Close field in " + where);
        if (is_missing_field(*close_field)) continue;
        const double close = parse_number(*close_field, where);

        OhlcvRow row;
        row.date = Date::parse_iso(*date_field);
        row.close = close;
        row.open = numeric("Open", close);
        row.high = numeric("High", std::max(row.open, close));
        row.low = numeric("Low", std::min(row.open, close));
        if (const auto adj = field_of(fields, "Adj Close"); adj) {
            if (is_missing_field(*adj))
                missing = true;
            else
                row.adj_close = parse_number(*adj, where);
        }
        if (const auto vol = field_of(fields, "Volume"); vol) {
            if (is_missing_field(*vol)) {
                missing = true;
            } else {
                const double v = parse_number(*vol, where);
                if (v < 0 || v != std::floor(v))
                    throw ParseError("volume is not a non-negative integer in " + where);
                row.volume = static_cast<long long>(v);
            }
        }
        if (missing) continue;
        rows.push_back(row);
    }
    if (rows.empty()) throw NoData("csv has no usable rows");

    std::stable_sort(rows.begin(), rows.end(),
                     [](const OhlcvRow& a, const OhlcvRow& b) { return a.date < b.date; });
    for (std::size_t i = 1; i < rows.size(); ++i)
        if (!(rows[i - 1].date < rows[i].date))
            throw ParseError("csv repeats date " + rows[i].date.to_string() +
                             " (corrupt export)");
    return OhlcvSeries(std::move(rows));
}

DatedSeries close_series(const OhlcvSeries& data) {
    if (data.empty()) throw NoData("close_series: empty input");
    std::vector<DatedPoint> points;
    points.reserve(data.size());
    for (const auto& row : data.rows()) points.push_back({row.date, row.close});
    return DatedSeries(std::move(points));
}

DatedSeries resample_annual(const DatedSeries& series) {
    std::map<int, std::pair<double, std::size_t>> by_year;  // year -> (sum, count)
    for (std::size_t i = 0; i < series.size(); ++i) {
        auto& [sum, count] = by_year[series.date(i).year];
        sum += series.value(i);
        ++count;
    }
    std::vector<DatedPoint> points;
    points.reserve(by_year.size());
    for (const auto& [year, agg] : by_year)
        points.push_back({Date::year_start(year), agg.first / static_cast<double>(agg.second)});
    return DatedSeries(std::move(points));
}

}  // namespace fincast::ingest
