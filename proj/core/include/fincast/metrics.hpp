#pragma once

#include <cstddef>
#include <span>

namespace fincast::metrics {

struct MetricsReport {
    double mae = 0.0;
    double mse = 0.0;
    double rmse = 0.0;
    double r2 = 0.0;
    std::size_t n = 0;
};

/// mae = mean|a-p|, mse = mean(a-p)^2, rmse = sqrt(mse),
/// r2 = 1 - SS_res / SS_tot.
/// Throws LengthMismatch on unequal or empty inputs and ConstantActual when
/// the actual series has zero variance (r2 undefined).
MetricsReport evaluate(std::span<const double> actual, std::span<const double> predicted);

}  // namespace fincast::metrics
