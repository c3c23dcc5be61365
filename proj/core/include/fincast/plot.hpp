#pragma once

#include <span>
#include <string>
#include <utility>
#include <vector>

#include "fincast/arima.hpp"
#include "fincast/series.hpp"

namespace fincast::plot {

enum class LineStyle { solid, dashed };

struct PlotSeries {
    std::string name;
    std::vector<std::pair<double, double>> points;  // (x, y)
    std::string color = "blue";                     // CSS color name
    LineStyle style = LineStyle::solid;
};

struct PlotSpec {
    std::string title;
    std::string x_label;
    std::string y_label;
    std::vector<PlotSeries> series;
    int width = 900;
    int height = 500;
};

/// Renders a static SVG 1.1 line chart, one polyline per series.
///
/// Layout: margins are 60 px (left, bottom) and 20 px (top, right); both axes
/// use linear scales padded 5% beyond the data range, so
///   px(x) = 60 + (x - xlo) / (xhi - xlo) * (width - 80)
///   py(y) = (height - 60) - (y - ylo) / (yhi - ylo) * (height - 80)
/// with coordinates written as "%.2f". Dashed series carry
/// stroke-dasharray="6,4". Output is byte-identical for identical specs.
///
/// Throws EmptySeries when there is no series or one has fewer than two
/// points, NonFiniteValue when any coordinate is NaN or infinite.
std::string render_line_chart(const PlotSpec& spec);

/// History in blue solid, forecast in red dashed; x is the calendar year.
std::string history_forecast_plot(const DatedSeries& history,
                                  const arima::ForecastResult& forecast);

/// Aligned actual (blue solid) vs predicted (red dashed); x is the sample index.
std::string actual_vs_predicted_plot(std::span<const double> actual,
                                     std::span<const double> predicted);

}  // namespace fincast::plot
