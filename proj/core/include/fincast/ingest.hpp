#pragma once

#include <chrono>
#include <string>

#include "fincast/series.hpp"

namespace fincast::ingest {

/// Headline consumer-price inflation, annual %.
inline constexpr const char* kDefaultIndicator = "FP.CPI.TOTL.ZG";
inline constexpr const char* kWorldBankBase = "https://api.worldbank.org";

struct FetchOptions {
    std::chrono::seconds timeout{30};
    /// Overridable for fixture-backed servers in tests.
    std::string base_url = kWorldBankBase;
};

/// GET {base}/v2/country/{code}/indicator/{indicator}?format=json&per_page=20000
/// and return the raw body. Throws NetworkError on transport failure and
/// HttpStatusError on non-200 responses.
std::string fetch_worldbank_series(const std::string& country_code, const std::string& indicator,
                                   const FetchOptions& options = {});

/// Parses a World Bank v2 JSON body: a 2-element array of
/// [pagination metadata, array of {date: "YYYY", value, ...}].
/// Entries with null values are dropped; "YYYY" becomes January 1 of that
/// year; the result is sorted ascending. Errors if metadata reports more
/// than one page. Throws ParseError / NoData.
DatedSeries parse_worldbank_json(const std::string& body);

/// Parses Yahoo-Finance-style CSV. Columns are resolved by header name; at
/// least Date and Close must be present (canonical header:
/// Date,Open,High,Low,Close,Adj Close,Volume). Rows with an empty or "null"
/// numeric field are dropped; remaining rows are sorted by date. Duplicate
/// dates are rejected as a corrupt export.
OhlcvSeries parse_yahoo_csv(const std::string& text);

/// Projects (date, close), preserving order. Throws NoData on empty input.
DatedSeries close_series(const OhlcvSeries& data);

/// One point per calendar year present in the input, dated January 1; years
/// with several observations are averaged, absent years stay absent.
DatedSeries resample_annual(const DatedSeries& series);

}  // namespace fincast::ingest
