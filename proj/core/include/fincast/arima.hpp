#pragma once

#include <string>
#include <vector>

#include "fincast/series.hpp"

namespace fincast::arima {

/// ARIMA(p, d, q) order. This toolkit fits AR-only models: q must be 0,
/// p >= 1, d <= 2.
struct ArimaOrder {
    int p = 15;
    int d = 1;
    int q = 0;
};

/// Fitted autoregression on the d-times differenced series:
/// x_t = intercept + sum_i coefficients[i] * x_{t-i-1} + e_t.
struct ArModel {
    ArimaOrder order;
    double intercept = 0.0;
    std::vector<double> coefficients;  // phi_1 .. phi_p, lag-1 first
    double in_sample_residual_variance = 0.0;
};

struct ForecastResult {
    std::vector<double> values;       // original units
    std::vector<Date> horizon_dates;  // annual continuation of the input dates
};

/// Conditional least squares fit: differences the series d times, then solves
/// OLS over all rows with full lag history via the normal equations.
/// Residual variance = SSE / (rows - p - 1).
/// Requires series.size() >= 2p + d + 1. Appends a note to `warnings` when
/// the regression has fewer than 3p rows.
ArModel fit(const DatedSeries& series, const ArimaOrder& order,
            std::vector<std::string>* warnings = nullptr);

/// Iterates the fitted recurrence on the differenced scale, feeding forecasts
/// back in as lag values, then reintegrates to original units. Dates continue
/// annually from the last observation.
ForecastResult forecast(const ArModel& model, const DatedSeries& series, int horizon);

/// One-step-ahead in-sample predictions in original units, for every time
/// point with full lag history. Used for the reported MAE/RMSE.
struct InSamplePredictions {
    std::vector<double> actual;
    std::vector<double> predicted;
};
InSamplePredictions one_step_insample(const ArModel& model, const DatedSeries& series);

}  // namespace fincast::arima
