#include "fincast/series.hpp"

#include <cmath>
#include <utility>

#include "fincast/errors.hpp"

namespace fincast {

DatedSeries::DatedSeries(std::vector<DatedPoint> points) {
    dates_.reserve(points.size());
    values_.reserve(points.size());
    for (const auto& p : points) {
        dates_.push_back(p.date);
        values_.push_back(p.value);
    }
    validate();
}

DatedSeries::DatedSeries(std::vector<Date> dates, std::vector<double> values)
    : dates_(std::move(dates)), values_(std::move(values)) {
    if (dates_.size() != values_.size())
        throw ParseError("series: date and value counts differ");
    validate();
}

void DatedSeries::validate() const {
    if (dates_.empty()) throw NoData("series has no points");
    for (std::size_t i = 0; i < dates_.size(); ++i) {
        if (!std::isfinite(values_[i]))
            throw NonFiniteValue("series value at " + dates_[i].to_string() + " is not finite");
        if (i > 0 && !(dates_[i - 1] < dates_[i]))
            throw ParseError("series dates not strictly increasing at " + dates_[i].to_string());
    }
}

OhlcvSeries::OhlcvSeries(std::vector<OhlcvRow> rows) : rows_(std::move(rows)) {
    for (std::size_t i = 0; i < rows_.size(); ++i) {
        const auto& r = rows_[i];
        const double prices[] = {r.open, r.high, r.low, r.close};
        for (double p : prices) {
            if (!std::isfinite(p) || p <= 0.0)
                throw ParseError("non-positive or non-finite price on " + r.date.to_string());
        }
        if (r.adj_close && !std::isfinite(*r.adj_close))
            throw ParseError("non-finite adjusted close on " + r.date.to_string());
        if (r.high < r.low)
            throw ParseError("high below low on " + r.date.to_string());
        if (r.volume < 0) throw ParseError("negative volume on " + r.date.to_string());
        if (i > 0 && !(rows_[i - 1].date < r.date))
            throw ParseError("bar dates not strictly increasing at " + r.date.to_string());
    }
}

}  // namespace fincast
