#include "fincast/plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

#include "fincast/errors.hpp"

namespace fincast::plot {

namespace {

constexpr double kMarginLeft = 60.0;
constexpr double kMarginBottom = 60.0;
constexpr double kMarginTop = 20.0;
constexpr double kMarginRight = 20.0;
constexpr double kPadFraction = 0.05;

std::string fmt_coord(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

std::string fmt_tick(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

std::string xml_escape(const std::string& s) {
    std::string out;
    out.reserve(s.size());
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    }
    return out;
}

struct Range {
    double lo, hi;       // padded axis range
    double dmin, dmax;   // raw data extremes (tick positions)
};

Range padded_range(double dmin, double dmax) {
    double span = dmax - dmin;
    if (span == 0.0) span = std::max(1.0, std::abs(dmax));
    const double pad = kPadFraction * span;
    return Range{dmin - pad, dmax + pad, dmin, dmax};
}

}  // namespace

std::string render_line_chart(const PlotSpec& spec) {
    if (spec.series.empty()) throw EmptySeries("render_line_chart: no series");
    double xmin = std::numeric_limits<double>::infinity();
    double xmax = -xmin;
    double ymin = xmin;
    double ymax = -xmin;
    for (const auto& s : spec.series) {
        if (s.points.size() < 2)
            throw EmptySeries("render_line_chart: series '" + s.name + "' has fewer than 2 points");
        for (const auto& [x, y] : s.points) {
            if (!std::isfinite(x) || !std::isfinite(y))
                throw NonFiniteValue("render_line_chart: non-finite point in series '" + s.name +
                                     "'");
            xmin = std::min(xmin, x);
            xmax = std::max(xmax, x);
            ymin = std::min(ymin, y);
            ymax = std::max(ymax, y);
        }
    }

    const double w = spec.width;
    const double h = spec.height;
    const Range rx = padded_range(xmin, xmax);
    const Range ry = padded_range(ymin, ymax);
    const double plot_w = w - kMarginLeft - kMarginRight;
    const double plot_h = h - kMarginTop - kMarginBottom;
    auto px = [&](double x) { return kMarginLeft + (x - rx.lo) / (rx.hi - rx.lo) * plot_w; };
    auto py = [&](double y) { return (h - kMarginBottom) - (y - ry.lo) / (ry.hi - ry.lo) * plot_h; };

    std::ostringstream svg;
    svg << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << spec.width
        << "\" height=\"" << spec.height << "\" viewBox=\"0 0 " << spec.width << " "
        << spec.height << "\">\n";
    svg << "<rect x=\"0\" y=\"0\" width=\"" << spec.width << "\" height=\"" << spec.height
        << "\" fill=\"white\"/>\n";

    if (!spec.title.empty())
        svg << "<text x=\"" << fmt_coord(w / 2.0)
            << "\" y=\"14\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"14\">"
            << xml_escape(spec.title) << "</text>\n";

    // Axes along the plot-area edges.
    const double x0 = kMarginLeft;
    const double y0 = h - kMarginBottom;
    svg << "<line x1=\"" << fmt_coord(x0) << "\" y1=\"" << fmt_coord(y0) << "\" x2=\""
        << fmt_coord(w - kMarginRight) << "\" y2=\"" << fmt_coord(y0)
        << "\" stroke=\"black\" stroke-width=\"1\"/>\n";
    svg << "<line x1=\"" << fmt_coord(x0) << "\" y1=\"" << fmt_coord(kMarginTop) << "\" x2=\""
        << fmt_coord(x0) << "\" y2=\"" << fmt_coord(y0)
        << "\" stroke=\"black\" stroke-width=\"1\"/>\n";

    // Min/max tick marks and labels on each axis.
    for (double tx : {rx.dmin, rx.dmax}) {
        const double cx = px(tx);
        svg << "<line x1=\"" << fmt_coord(cx) << "\" y1=\"" << fmt_coord(y0) << "\" x2=\""
            << fmt_coord(cx) << "\" y2=\"" << fmt_coord(y0 + 5.0)
            << "\" stroke=\"black\" stroke-width=\"1\"/>\n";
        svg << "<text x=\"" << fmt_coord(cx) << "\" y=\"" << fmt_coord(y0 + 18.0)
            << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">"
            << fmt_tick(tx) << "</text>\n";
    }
    for (double ty : {ry.dmin, ry.dmax}) {
        const double cy = py(ty);
        svg << "<line x1=\"" << fmt_coord(x0 - 5.0) << "\" y1=\"" << fmt_coord(cy) << "\" x2=\""
            << fmt_coord(x0) << "\" y2=\"" << fmt_coord(cy)
            << "\" stroke=\"black\" stroke-width=\"1\"/>\n";
        svg << "<text x=\"" << fmt_coord(x0 - 8.0) << "\" y=\"" << fmt_coord(cy + 4.0)
            << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">"
            << fmt_tick(ty) << "</text>\n";
    }

    if (!spec.x_label.empty())
        svg << "<text x=\"" << fmt_coord(kMarginLeft + plot_w / 2.0) << "\" y=\""
            << fmt_coord(h - 15.0)
            << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">"
            << xml_escape(spec.x_label) << "</text>\n";
    if (!spec.y_label.empty())
        svg << "<text x=\"15\" y=\"" << fmt_coord(kMarginTop + plot_h / 2.0)
            << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\""
            << " transform=\"rotate(-90 15 " << fmt_coord(kMarginTop + plot_h / 2.0) << ")\">"
            << xml_escape(spec.y_label) << "</text>\n";

    // Legend, top right inside the plot area.
    double ly = kMarginTop + 14.0;
    for (const auto& s : spec.series) {
        const double lx = w - kMarginRight - 150.0;
        svg << "<line x1=\"" << fmt_coord(lx) << "\" y1=\"" << fmt_coord(ly - 4.0) << "\" x2=\""
            << fmt_coord(lx + 24.0) << "\" y2=\"" << fmt_coord(ly - 4.0) << "\" stroke=\""
            << xml_escape(s.color) << "\" stroke-width=\"1.5\"";
        if (s.style == LineStyle::dashed) svg << " stroke-dasharray=\"6,4\"";
        svg << "/>\n";
        svg << "<text x=\"" << fmt_coord(lx + 30.0) << "\" y=\"" << fmt_coord(ly)
            << "\" font-family=\"sans-serif\" font-size=\"11\">" << xml_escape(s.name)
            << "</text>\n";
        ly += 16.0;
    }

    for (const auto& s : spec.series) {
        svg << "<polyline fill=\"none\" stroke=\"" << xml_escape(s.color)
            << "\" stroke-width=\"1.5\"";
        if (s.style == LineStyle::dashed) svg << " stroke-dasharray=\"6,4\"";
        svg << " points=\"";
        bool first = true;
        for (const auto& [x, y] : s.points) {
            if (!first) svg << " ";
            svg << fmt_coord(px(x)) << "," << fmt_coord(py(y));
            first = false;
        }
        svg << "\"/>\n";
    }

    svg << "</svg>\n";
    return svg.str();
}

std::string history_forecast_plot(const DatedSeries& history,
                                  const arima::ForecastResult& forecast) {
    PlotSpec spec;
    spec.title = "History and forecast";
    spec.x_label = "year";
    spec.y_label = "value";

    PlotSeries hist;
    hist.name = "history";
    hist.color = "blue";
    hist.style = LineStyle::solid;
    for (std::size_t i = 0; i < history.size(); ++i)
        hist.points.emplace_back(static_cast<double>(history.date(i).year), history.value(i));
    spec.series.push_back(std::move(hist));

    PlotSeries fc;
    fc.name = "forecast";
    fc.color = "red";
    fc.style = LineStyle::dashed;
    for (std::size_t i = 0; i < forecast.values.size(); ++i)
        fc.points.emplace_back(static_cast<double>(forecast.horizon_dates[i].year),
                               forecast.values[i]);
    spec.series.push_back(std::move(fc));

    return render_line_chart(spec);
}

std::string actual_vs_predicted_plot(std::span<const double> actual,
                                     std::span<const double> predicted) {
    if (actual.size() != predicted.size())
        throw LengthMismatch("actual_vs_predicted_plot: lengths differ");
    PlotSpec spec;
    spec.title = "Actual vs predicted";
    spec.x_label = "sample";
    spec.y_label = "price";

    PlotSeries a{"actual", {}, "blue", LineStyle::solid};
    PlotSeries p{"predicted", {}, "red", LineStyle::dashed};
    for (std::size_t i = 0; i < actual.size(); ++i) {
        a.points.emplace_back(static_cast<double>(i), actual[i]);
        p.points.emplace_back(static_cast<double>(i), predicted[i]);
    }
    spec.series.push_back(std::move(a));
    spec.series.push_back(std::move(p));
    return render_line_chart(spec);
}

}  // namespace fincast::plot
