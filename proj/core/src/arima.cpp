#include "fincast/arima.hpp"

#include <cstddef>
#include <string>

#include "fincast/errors.hpp"
#include "fincast/linalg.hpp"
#include "fincast/preprocess.hpp"

namespace fincast::arima {

namespace {

void check_order(const ArimaOrder& order) {
    if (order.q != 0) throw Error("arima: moving-average terms are not supported (q must be 0)");
    if (order.p < 1) throw Error("arima: p must be at least 1");
    if (order.d < 0 || order.d > 2) throw Error("arima: d must be in [0, 2]");
}

}  // namespace

ArModel fit(const DatedSeries& series, const ArimaOrder& order,
            std::vector<std::string>* warnings) {
    check_order(order);
    const int p = order.p;
    const int d = order.d;
    const std::size_t min_len = static_cast<std::size_t>(2 * p + d + 1);
    if (series.size() < min_len)
        throw InsufficientData("arima fit: need at least " + std::to_string(min_len) +
                               " observations for order (" + std::to_string(p) + "," +
                               std::to_string(d) + ",0), got " + std::to_string(series.size()));

    const std::vector<double> x = preprocess::difference(series.values(), d);
    const std::size_t m = x.size();
    const std::size_t rows = m - static_cast<std::size_t>(p);

    if (warnings && rows < static_cast<std::size_t>(3 * p))
        warnings->push_back("arima fit: only " + std::to_string(rows) + " regression rows for p=" +
                            std::to_string(p) + "; estimates may be unstable");

    // Row t predicts x[t] from [1, x[t-1], ..., x[t-p]].
    linalg::Matrix design(rows, static_cast<std::size_t>(p) + 1);
    std::vector<double> target(rows, 0.0);
    for (std::size_t r = 0; r < rows; ++r) {
        const std::size_t t = r + static_cast<std::size_t>(p);
        design.at(r, 0) = 1.0;
        for (int i = 1; i <= p; ++i) design.at(r, static_cast<std::size_t>(i)) = x[t - i];
        target[r] = x[t];
    }

    const std::vector<double> beta = linalg::solve_least_squares(design, target);

    ArModel model;
    model.order = order;
    model.intercept = beta[0];
    model.coefficients.assign(beta.begin() + 1, beta.end());

    double sse = 0.0;
    for (std::size_t r = 0; r < rows; ++r) {
        double fitted = model.intercept;
        for (int i = 1; i <= p; ++i)
            fitted += model.coefficients[static_cast<std::size_t>(i - 1)] *
                      design.at(r, static_cast<std::size_t>(i));
        const double e = target[r] - fitted;
        sse += e * e;
    }
    const std::size_t dof = rows > static_cast<std::size_t>(p) + 1
        ? rows - static_cast<std::size_t>(p) - 1
        : 0;
    model.in_sample_residual_variance = dof > 0 ? sse / static_cast<double>(dof) : 0.0;
    return model;
}

ForecastResult forecast(const ArModel& model, const DatedSeries& series, int horizon) {
    check_order(model.order);
    if (horizon < 1) throw Error("arima forecast: horizon must be at least 1");
    const int p = model.order.p;
    const int d = model.order.d;
    if (static_cast<int>(model.coefficients.size()) != p)
        throw ShapeError("arima forecast: coefficient count does not match order.p");
    if (series.size() < static_cast<std::size_t>(p + d))
        throw InsufficientData("arima forecast: series shorter than p + d");

    // Recurrence on the differenced scale; forecasts are appended so later
    // steps consume earlier predictions as lag values.
    std::vector<double> hist = preprocess::difference(series.values(), d);
    std::vector<double> diff_forecast;
    diff_forecast.reserve(static_cast<std::size_t>(horizon));
    for (int k = 0; k < horizon; ++k) {
        double v = model.intercept;
        for (int i = 1; i <= p; ++i)
            v += model.coefficients[static_cast<std::size_t>(i - 1)] * hist[hist.size() - i];
        hist.push_back(v);
        diff_forecast.push_back(v);
    }

    const auto& y = series.values();
    std::vector<double> tail(y.end() - d, y.end());
    ForecastResult result;
    result.values = preprocess::undifference(tail, diff_forecast, d);
    result.horizon_dates.reserve(static_cast<std::size_t>(horizon));
    const int last_year = series.last_date().year;
    for (int k = 1; k <= horizon; ++k)
        result.horizon_dates.push_back(Date::year_start(last_year + k));
    return result;
}

InSamplePredictions one_step_insample(const ArModel& model, const DatedSeries& series) {
    check_order(model.order);
    const int p = model.order.p;
    const int d = model.order.d;
    if (series.size() < static_cast<std::size_t>(p + d + 1))
        throw InsufficientData("one_step_insample: series shorter than p + d + 1");

    const std::vector<double> x = preprocess::difference(series.values(), d);
    const auto& y = series.values();

    InSamplePredictions out;
    for (std::size_t t = static_cast<std::size_t>(p); t < x.size(); ++t) {
        double xhat = model.intercept;
        for (int i = 1; i <= p; ++i)
            xhat += model.coefficients[static_cast<std::size_t>(i - 1)] * x[t - i];
        // x[t] differences y[t+d]; rebuild the one-step prediction of y[t+d]
        // from the d preceding actual values.
        std::vector<double> last(y.begin() + t, y.begin() + t + d);
        const std::vector<double> pred = preprocess::undifference(last, {&xhat, 1}, d);
        out.predicted.push_back(pred[0]);
        out.actual.push_back(y[t + d]);
    }
    return out;
}

}  // namespace fincast::arima
