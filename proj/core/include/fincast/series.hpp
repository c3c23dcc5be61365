#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "fincast/date.hpp"

namespace fincast {

struct DatedPoint {
    Date date;
    double value;
};

/// Ordered (date, value) observations: the universal time-series carrier.
/// Construction enforces: at least one point, strictly increasing dates,
/// all values finite. Immutable after construction.
class DatedSeries {
public:
    explicit DatedSeries(std::vector<DatedPoint> points);
    DatedSeries(std::vector<Date> dates, std::vector<double> values);

    std::size_t size() const { return dates_.size(); }
    const std::vector<Date>& dates() const { return dates_; }
    const std::vector<double>& values() const { return values_; }
    const Date& date(std::size_t i) const { return dates_[i]; }
    double value(std::size_t i) const { return values_[i]; }
    const Date& last_date() const { return dates_.back(); }

private:
    void validate() const;

    std::vector<Date> dates_;
    std::vector<double> values_;
};

struct OhlcvRow {
    Date date;
    double open = 0.0;
    double high = 0.0;
    double low = 0.0;
    double close = 0.0;
    std::optional<double> adj_close;
    long long volume = 0;
};

/// Daily OHLCV bars. Construction enforces: strictly increasing dates,
/// finite positive prices, high >= low, non-negative volume. May be empty.
class OhlcvSeries {
public:
    OhlcvSeries() = default;
    explicit OhlcvSeries(std::vector<OhlcvRow> rows);

    std::size_t size() const { return rows_.size(); }
    bool empty() const { return rows_.empty(); }
    const std::vector<OhlcvRow>& rows() const { return rows_; }

private:
    std::vector<OhlcvRow> rows_;
};

}  // namespace fincast
