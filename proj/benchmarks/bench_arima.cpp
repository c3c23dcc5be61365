#include <benchmark/benchmark.h>

#include <vector>

#include "fincast/arima.hpp"
#include "fincast/rng.hpp"

using namespace fincast;

namespace {

DatedSeries inflation_like_series(std::size_t n) {
    Rng rng(11);
    std::vector<DatedPoint> pts;
    double level = 6.0;
    for (std::size_t i = 0; i < n; ++i) {
        level += 0.6 * rng.normal();
        pts.push_back({Date::year_start(1960 + static_cast<int>(i)), level});
    }
    return DatedSeries(std::move(pts));
}

void BM_fit_ar15_d1(benchmark::State& state) {
    const auto series = inflation_like_series(64);
    for (auto _ : state)
        benchmark::DoNotOptimize(arima::fit(series, arima::ArimaOrder{15, 1, 0}));
}
BENCHMARK(BM_fit_ar15_d1);

void BM_forecast_10y(benchmark::State& state) {
    const auto series = inflation_like_series(64);
    const auto model = arima::fit(series, arima::ArimaOrder{15, 1, 0});
    for (auto _ : state)
        benchmark::DoNotOptimize(arima::forecast(model, series, 10));
}
BENCHMARK(BM_forecast_10y);

}  // namespace
