#include <benchmark/benchmark.h>

#include <vector>

#include "fincast/preprocess.hpp"
#include "fincast/rng.hpp"

using namespace fincast;

namespace {

std::vector<double> prices(std::size_t n) {
    Rng rng(3);
    std::vector<double> v(n);
    double level = 100.0;
    for (double& x : v) {
        level += rng.normal();
        x = level;
    }
    return v;
}

void BM_fit_scaler_5060(benchmark::State& state) {
    const auto v = prices(5060);
    for (auto _ : state) benchmark::DoNotOptimize(preprocess::fit_scaler(v));
}
BENCHMARK(BM_fit_scaler_5060);

void BM_make_windows_5060x60(benchmark::State& state) {
    const auto v = prices(5060);
    const auto scaler = preprocess::fit_scaler(v);
    const auto scaled = preprocess::transform(scaler, v);
    for (auto _ : state) benchmark::DoNotOptimize(preprocess::make_windows(scaled, 60));
}
BENCHMARK(BM_make_windows_5060x60);

}  // namespace
