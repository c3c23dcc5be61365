#include <benchmark/benchmark.h>

#include <cmath>

#include "fincast/plot.hpp"

using namespace fincast;

namespace {

void BM_render_two_series_1000pts(benchmark::State& state) {
    plot::PlotSpec spec;
    spec.title = "bench";
    plot::PlotSeries a{"actual", {}, "blue", plot::LineStyle::solid};
    plot::PlotSeries b{"predicted", {}, "red", plot::LineStyle::dashed};
    for (int i = 0; i < 1000; ++i) {
        a.points.push_back({static_cast<double>(i), std::sin(i * 0.01)});
        b.points.push_back({static_cast<double>(i), std::sin(i * 0.01) + 0.05});
    }
    spec.series = {a, b};
    for (auto _ : state) benchmark::DoNotOptimize(plot::render_line_chart(spec));
}
BENCHMARK(BM_render_two_series_1000pts);

}  // namespace
