#include <benchmark/benchmark.h>

#include <vector>

#include "fincast/lstm.hpp"
#include "fincast/preprocess.hpp"
#include "fincast/rng.hpp"

using namespace fincast;

namespace {

preprocess::WindowedDataset make_data(int lookback, int count) {
    Rng rng(7);
    std::vector<double> series(static_cast<std::size_t>(lookback + count));
    for (double& v : series) v = rng.next_double();
    return preprocess::make_windows(series, lookback);
}

void BM_forward_default_shape(benchmark::State& state) {
    const auto net = lstm::init_network(42);
    const auto data = make_data(60, 1);
    for (auto _ : state)
        benchmark::DoNotOptimize(lstm::forward(net, data.inputs[0]));
}
BENCHMARK(BM_forward_default_shape);

void BM_loss_and_gradients_batch32(benchmark::State& state) {
    const auto net = lstm::init_network(42);
    const auto data = make_data(60, 32);
    std::vector<std::size_t> idx(32);
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    for (auto _ : state)
        benchmark::DoNotOptimize(lstm::loss_and_gradients(net, data, idx));
}
BENCHMARK(BM_loss_and_gradients_batch32);

void BM_adam_step_30651_params(benchmark::State& state) {
    auto net = lstm::init_network(42);
    auto params = lstm::flatten_params(net);
    std::vector<double> grads(params.size(), 1e-3);
    lstm::AdamState adam;
    lstm::TrainConfig config;
    for (auto _ : state) {
        lstm::adam_step(params, grads, adam, config);
        benchmark::DoNotOptimize(params.data());
    }
}
BENCHMARK(BM_adam_step_30651_params);

}  // namespace
