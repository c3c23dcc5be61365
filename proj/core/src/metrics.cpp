#include "fincast/metrics.hpp"

#include <cmath>

#include "fincast/errors.hpp"

namespace fincast::metrics {

MetricsReport evaluate(std::span<const double> actual, std::span<const double> predicted) {
    if (actual.size() != predicted.size())
        throw LengthMismatch("evaluate: actual and predicted lengths differ");
    if (actual.empty()) throw LengthMismatch("evaluate: empty inputs");

    const auto n = actual.size();
    double abs_sum = 0.0;
    double sq_sum = 0.0;
    double mean = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double e = actual[i] - predicted[i];
        abs_sum += std::abs(e);
        sq_sum += e * e;
        mean += actual[i];
    }
    mean /= static_cast<double>(n);

    double ss_tot = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double d = actual[i] - mean;
        ss_tot += d * d;
    }
    if (ss_tot == 0.0) throw ConstantActual("evaluate: constant actual series, r2 undefined");

    MetricsReport r;
    r.n = n;
    r.mae = abs_sum / static_cast<double>(n);
    r.mse = sq_sum / static_cast<double>(n);
    r.rmse = std::sqrt(r.mse);
    r.r2 = 1.0 - sq_sum / ss_tot;
    return r;
}

}  // namespace fincast::metrics
