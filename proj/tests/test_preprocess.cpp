#include <doctest.h>

#include <cmath>
#include <vector>

#include "fincast/errors.hpp"
#include "fincast/ingest.hpp"
#include "fincast/preprocess.hpp"
#include "fincast/rng.hpp"
#include "test_support.hpp"

using namespace fincast;
using namespace fincast::preprocess;

TEST_CASE("fit_scaler finds the extremes") {
    const std::vector<double> v{2.0, 4.0, 6.0};
    const auto p = fit_scaler(v);
    CHECK(p.min == 2.0);
    CHECK(p.max == 6.0);
}

TEST_CASE("fit_scaler rejects constant input") {
    const std::vector<double> v{5.0, 5.0, 5.0};
    CHECK_THROWS_AS(fit_scaler(v), DegenerateRange);
}

TEST_CASE("fit_scaler matches an independent column scan of the AAPL fixture") {
    const auto bars = ingest::parse_yahoo_csv(testsupport::read_fixture("aapl.csv"));
    const auto closes = ingest::close_series(bars).values();
    // independent scan, no library calls
    double lo = closes[0], hi = closes[0];
    for (double c : closes) {
        if (c < lo) lo = c;
        if (c > hi) hi = c;
    }
    const auto p = fit_scaler(closes);
    CHECK(p.min == lo);
    CHECK(p.max == hi);
}

TEST_CASE("transform maps the midpoint to 0.5") {
    const ScalerParams p{2.0, 6.0};
    CHECK(transform(p, 4.0) == doctest::Approx(0.5));
}

TEST_CASE("transform/inverse round trip") {
    const ScalerParams p{2.0, 6.0};
    CHECK(inverse_transform(p, transform(p, 3.7)) == doctest::Approx(3.7).epsilon(1e-12));
}

TEST_CASE("inverse_transform extrapolates beyond [0,1]") {
    const ScalerParams p{2.0, 6.0};
    CHECK(inverse_transform(p, 1.25) == doctest::Approx(7.0));
}

TEST_CASE("difference by hand") {
    const std::vector<double> v{1, 3, 6, 10};
    CHECK(difference(v, 1) == std::vector<double>{2, 3, 4});
    CHECK(difference(v, 0) == v);
    CHECK(difference(v, 2) == std::vector<double>{1, 1});
    CHECK_THROWS_AS(difference(std::vector<double>{1, 2}, 2), InsufficientData);
}

TEST_CASE("undifference by hand") {
    const std::vector<double> last{10.0};
    const std::vector<double> diffs{2.0, 3.0};
    CHECK(undifference(last, diffs, 1) == std::vector<double>{12.0, 15.0});

    CHECK(undifference({}, {}, 0).empty());

    const std::vector<double> v{1, 3, 6, 10};
    const auto d1 = difference(v, 1);
    const std::vector<double> head{v[0]};
    CHECK(undifference(head, d1, 1) == std::vector<double>{3, 6, 10});
}

TEST_CASE("make_windows enumerates inputs and targets") {
    const std::vector<double> v{0.1, 0.2, 0.3, 0.4};
    const auto ds = make_windows(v, 2);
    REQUIRE(ds.size() == 2);
    CHECK(ds.inputs[0] == std::vector<double>{0.1, 0.2});
    CHECK(ds.inputs[1] == std::vector<double>{0.2, 0.3});
    CHECK(ds.targets == std::vector<double>{0.3, 0.4});
}

TEST_CASE("make_windows boundary and count") {
    const std::vector<double> two{0.1, 0.2};
    CHECK_THROWS_AS(make_windows(two, 2), InsufficientData);

    std::vector<double> big(5060, 0.0);
    for (std::size_t i = 0; i < big.size(); ++i) big[i] = static_cast<double>(i);
    CHECK(make_windows(big, 60).size() == 5000);
}

TEST_CASE("chrono_split counts") {
    std::vector<double> v(12, 0.0);
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = static_cast<double>(i);
    const auto ds10 = make_windows(v, 2);  // 10 windows
    const auto s = chrono_split(ds10, 0.8);
    CHECK(s.train.size() == 8);
    CHECK(s.test.size() == 2);

    std::vector<double> w{0, 1, 2, 3, 4, 5, 6};
    const auto ds5 = make_windows(w, 2);  // 5 windows
    const auto s2 = chrono_split(ds5, 0.9);
    CHECK(s2.train.size() == 4);
    CHECK(s2.test.size() == 1);
}

TEST_CASE("chrono_split refuses an empty side") {
    std::vector<double> v{0, 1, 2};
    const auto ds = make_windows(v, 2);  // 1 window
    CHECK_THROWS_AS(chrono_split(ds, 0.8), InsufficientData);
}

// --- properties --------------------------------------------------------------

TEST_CASE("property: scaler round trip within 1e-12 relative") {
    Rng rng(0xfeedULL);
    for (int iter = 0; iter < 200; ++iter) {
        const int n = 2 + static_cast<int>(rng.next_below(40));
        std::vector<double> v(n);
        for (double& x : v) x = rng.uniform(-1e4, 1e4);
        v[0] -= 1.0;  // guard against an all-equal draw
        const auto p = fit_scaler(v);
        for (double x : v) {
            const double back = inverse_transform(p, transform(p, x));
            CHECK(std::abs(back - x) <= 1e-12 * std::max(1.0, std::abs(x)));
        }
        // fitted extremes map to exactly 0 and 1
        CHECK(transform(p, p.min) == 0.0);
        CHECK(transform(p, p.max) == 1.0);
    }
}

TEST_CASE("property: difference and undifference invert for d <= 3") {
    Rng rng(0xd1ffULL);
    for (int iter = 0; iter < 200; ++iter) {
        const int d = static_cast<int>(rng.next_below(4));
        const int n = d + 2 + static_cast<int>(rng.next_below(30));
        std::vector<double> v(n);
        for (double& x : v) x = rng.uniform(-50.0, 50.0);

        const auto diffs = difference(v, d);
        const std::vector<double> head(v.begin(), v.begin() + d);
        const auto rebuilt = undifference(head, diffs, d);
        REQUIRE(rebuilt.size() == v.size() - static_cast<std::size_t>(d));
        for (std::size_t i = 0; i < rebuilt.size(); ++i)
            CHECK(rebuilt[i] == doctest::Approx(v[i + d]).epsilon(1e-9));
    }
}

TEST_CASE("property: window count and split preserve every window in order") {
    Rng rng(0x5eedULL);
    for (int iter = 0; iter < 100; ++iter) {
        const int lookback = 1 + static_cast<int>(rng.next_below(8));
        const int n = lookback + 3 + static_cast<int>(rng.next_below(60));
        std::vector<double> v(n);
        for (double& x : v) x = rng.next_double();

        const auto ds = make_windows(v, lookback);
        CHECK(ds.size() == static_cast<std::size_t>(n - lookback));

        const double ratio = 0.2 + 0.6 * rng.next_double();
        const std::size_t n_train =
            static_cast<std::size_t>(std::floor(ratio * static_cast<double>(ds.size())));
        if (n_train == 0 || n_train == ds.size()) continue;

        const auto s = chrono_split(ds, ratio);
        CHECK(s.train.size() == n_train);
        CHECK(s.train.size() + s.test.size() == ds.size());
        for (std::size_t i = 0; i < ds.size(); ++i) {
            const auto& got = i < n_train ? s.train.inputs[i] : s.test.inputs[i - n_train];
            const double target = i < n_train ? s.train.targets[i] : s.test.targets[i - n_train];
            CHECK(got == ds.inputs[i]);
            CHECK(target == ds.targets[i]);
        }
    }
}
