#include <doctest.h>

#include <cmath>
#include <vector>

#include "fincast/arima.hpp"
#include "fincast/errors.hpp"
#include "fincast/ingest.hpp"
#include "fincast/rng.hpp"
#include "test_support.hpp"

using namespace fincast;
using namespace fincast::arima;

namespace {

DatedSeries annual_series(const std::vector<double>& values, int first_year = 1950) {
    std::vector<DatedPoint> pts;
    for (std::size_t i = 0; i < values.size(); ++i)
        pts.push_back({Date::year_start(first_year + static_cast<int>(i)), values[i]});
    return DatedSeries(std::move(pts));
}

/// Noiseless AR(p) recurrence generator.
std::vector<double> gen_ar(double intercept, const std::vector<double>& phi,
                           const std::vector<double>& start, std::size_t n) {
    std::vector<double> x = start;
    while (x.size() < n) {
        double v = intercept;
        for (std::size_t i = 0; i < phi.size(); ++i) v += phi[i] * x[x.size() - 1 - i];
        x.push_back(v);
    }
    return x;
}

/// Independent forecasting oracle: plain loops, no shared code with the
/// library's forecast path. Differences the series by hand, runs the
/// recurrence, reintegrates by cumulative summation.
std::vector<double> brute_force_forecast(const ArModel& model, const std::vector<double>& y,
                                         int horizon) {
    std::vector<double> x = y;
    for (int pass = 0; pass < model.order.d; ++pass) {
        std::vector<double> next;
        for (std::size_t i = 1; i < x.size(); ++i) next.push_back(x[i] - x[i - 1]);
        x = next;
    }
    std::vector<double> diff_fc;
    for (int k = 0; k < horizon; ++k) {
        double v = model.intercept;
        for (int i = 1; i <= model.order.p; ++i)
            v += model.coefficients[static_cast<std::size_t>(i - 1)] * x[x.size() - i];
        x.push_back(v);
        diff_fc.push_back(v);
    }
    if (model.order.d == 0) return diff_fc;
    if (model.order.d == 1) {
        std::vector<double> out;
        double acc = y.back();
        for (double v : diff_fc) {
            acc += v;
            out.push_back(acc);
        }
        return out;
    }
    // d == 2: integrate twice
    std::vector<double> first;
    double w = y[y.size() - 1] - y[y.size() - 2];
    for (double v : diff_fc) {
        w += v;
        first.push_back(w);
    }
    std::vector<double> out;
    double acc = y.back();
    for (double v : first) {
        acc += v;
        out.push_back(acc);
    }
    return out;
}

}  // namespace

TEST_CASE("noiseless AR(1) is recovered exactly") {
    // x0 = 0, x_t = 1 + 0.5 x_{t-1}; 30 points
    const auto x = gen_ar(1.0, {0.5}, {0.0}, 30);
    const auto model = fit(annual_series(x), ArimaOrder{1, 0, 0});
    CHECK(model.intercept == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(model.coefficients[0] == doctest::Approx(0.5).epsilon(1e-8));
    CHECK(model.in_sample_residual_variance == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("constant series differenced to zeros is singular") {
    const std::vector<double> flat(20, 5.0);
    CHECK_THROWS_AS(fit(annual_series(flat), ArimaOrder{1, 1, 0}), SingularDesign);
}

TEST_CASE("order (15,1,0) fits the inflation fixture with 15 coefficients") {
    const auto series = ingest::resample_annual(
        ingest::parse_worldbank_json(testsupport::read_fixture("worldbank_in.json")));
    std::vector<std::string> warnings;
    const auto model = fit(series, ArimaOrder{15, 1, 0}, &warnings);
    CHECK(model.coefficients.size() == 15);
    CHECK(model.order.p == 15);
    // 64 points -> 63 diffs -> 48 rows > 45 = 3p: no stability warning
    CHECK(warnings.empty());
}

TEST_CASE("row-count warning fires when rows < 3p") {
    Rng rng(0x3aabULL);
    std::vector<double> x(40);
    for (double& v : x) v = 5.0 + rng.normal();  // rich enough for a full-rank design
    std::vector<std::string> warnings;
    (void)fit(annual_series(x), ArimaOrder{15, 1, 0}, &warnings);  // 24 rows < 45 = 3p
    REQUIRE(warnings.size() == 1);
    CHECK(warnings[0].find("unstable") != std::string::npos);
}

TEST_CASE("AR(1) forecast at the fixed point stays put") {
    // c = 1, phi = 0.5: fixed point 2.0
    ArModel model;
    model.order = ArimaOrder{1, 0, 0};
    model.intercept = 1.0;
    model.coefficients = {0.5};
    const auto series = annual_series({1.5, 1.9, 2.0});
    const auto fc = forecast(model, series, 2);
    REQUIRE(fc.values.size() == 2);
    CHECK(fc.values[0] == doctest::Approx(2.0));
    CHECK(fc.values[1] == doctest::Approx(2.0));
}

TEST_CASE("forecast dates continue annually") {
    const auto series = ingest::resample_annual(
        ingest::parse_worldbank_json(testsupport::read_fixture("worldbank_in.json")));
    const auto model = fit(series, ArimaOrder{15, 1, 0});
    const auto fc = forecast(model, series, 10);
    REQUIRE(fc.values.size() == 10);
    REQUIRE(fc.horizon_dates.size() == 10);
    const int last = series.last_date().year;
    for (int k = 0; k < 10; ++k) {
        CHECK(fc.horizon_dates[k].year == last + k + 1);
        CHECK(fc.horizon_dates[k].month == 1);
        CHECK(std::isfinite(fc.values[k]));
    }
}

TEST_CASE("zero-drift random walk repeats the last value") {
    ArModel model;
    model.order = ArimaOrder{1, 1, 0};
    model.intercept = 0.0;
    model.coefficients = {0.0};
    const auto series = annual_series({3.0, 7.0, 4.0, 9.0});
    const auto fc = forecast(model, series, 5);
    for (double v : fc.values) CHECK(v == doctest::Approx(9.0));
}

TEST_CASE("property: exact recovery for noiseless AR(p), p <= 3") {
    Rng rng(0xa11ceULL);
    int done = 0;
    while (done < 30) {
        const int p = 1 + static_cast<int>(rng.next_below(3));
        // sum |phi| < 0.95 guarantees stationarity and bounded trajectories
        std::vector<double> phi(p);
        double budget = 0.95;
        for (int i = 0; i < p; ++i) {
            phi[i] = rng.uniform(-budget / (p - i), budget / (p - i));
            budget -= std::abs(phi[i]);
        }
        const double c = rng.uniform(-1.0, 1.0);
        std::vector<double> start(p);
        for (double& s : start) s = rng.uniform(-2.0, 2.0);
        const auto x = gen_ar(c, phi, start, 80);

        const auto model = fit(annual_series(x), ArimaOrder{p, 0, 0});
        CHECK(model.intercept == doctest::Approx(c).epsilon(1e-6));
        for (int i = 0; i < p; ++i)
            CHECK(model.coefficients[i] == doctest::Approx(phi[i]).epsilon(1e-6));
        ++done;
    }
}

TEST_CASE("property: fitted stationary models forecast finite values") {
    Rng rng(0xbee5ULL);
    for (int iter = 0; iter < 20; ++iter) {
        const auto x = gen_ar(0.4, {0.6, -0.2}, {0.0, 0.5}, 120);
        std::vector<double> noisy = x;
        for (double& v : noisy) v += 0.05 * rng.normal();
        const auto model = fit(annual_series(noisy), ArimaOrder{2, 0, 0});
        double abs_sum = 0.0;
        for (double c : model.coefficients) abs_sum += std::abs(c);
        if (abs_sum >= 1.0) continue;  // contractivity is the test precondition
        const auto fc = forecast(model, annual_series(noisy), 50);
        for (double v : fc.values) CHECK(std::isfinite(v));
    }
}

TEST_CASE("d=1 pipeline matches the brute-force oracle to 1e-9") {
    // Differenced series follows a noiseless AR(1); the level series trends.
    const auto diffs = gen_ar(0.5, {0.3}, {0.2}, 60);
    std::vector<double> y{10.0};
    for (double d : diffs) y.push_back(y.back() + d);

    const auto series = annual_series(y);
    const auto model = fit(series, ArimaOrder{1, 1, 0});
    const auto fc = forecast(model, series, 10);
    const auto oracle = brute_force_forecast(model, y, 10);
    REQUIRE(fc.values.size() == oracle.size());
    for (std::size_t i = 0; i < oracle.size(); ++i)
        CHECK(fc.values[i] == doctest::Approx(oracle[i]).epsilon(1e-9));
}

TEST_CASE("determinism: identical input, bit-identical coefficients") {
    const auto series = ingest::resample_annual(
        ingest::parse_worldbank_json(testsupport::read_fixture("worldbank_in.json")));
    const auto a = fit(series, ArimaOrder{15, 1, 0});
    const auto b = fit(series, ArimaOrder{15, 1, 0});
    CHECK(a.intercept == b.intercept);
    REQUIRE(a.coefficients.size() == b.coefficients.size());
    for (std::size_t i = 0; i < a.coefficients.size(); ++i)
        CHECK(a.coefficients[i] == b.coefficients[i]);
}

TEST_CASE("in-sample one-step predictions track a noiseless AR(1) exactly") {
    const auto x = gen_ar(1.0, {0.5}, {0.0}, 30);
    const auto series = annual_series(x);
    const auto model = fit(series, ArimaOrder{1, 0, 0});
    const auto pred = one_step_insample(model, series);
    REQUIRE(pred.actual.size() == x.size() - 1);
    for (std::size_t i = 0; i < pred.actual.size(); ++i)
        CHECK(pred.predicted[i] == doctest::Approx(pred.actual[i]).epsilon(1e-9));
}

TEST_CASE("fit preconditions") {
    const auto x = gen_ar(1.0, {0.5}, {0.0}, 10);
    CHECK_THROWS_AS(fit(annual_series(x), ArimaOrder{5, 1, 0}), InsufficientData);
    CHECK_THROWS_AS(fit(annual_series(x), ArimaOrder{2, 0, 1}), Error);  // q != 0
}
