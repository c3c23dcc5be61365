#include "fincast/preprocess.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "fincast/errors.hpp"

namespace fincast::preprocess {

ScalerParams fit_scaler(std::span<const double> values) {
    if (values.empty()) throw InsufficientData("fit_scaler: no values");
    double lo = values[0];
    double hi = values[0];
    for (double v : values) {
        if (!std::isfinite(v)) throw NonFiniteValue("fit_scaler: non-finite value");
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    if (!(hi > lo)) throw DegenerateRange("fit_scaler: constant input, max == min");
    return ScalerParams{lo, hi};
}

double transform(const ScalerParams& p, double x) { return (x - p.min) / (p.max - p.min); }

double inverse_transform(const ScalerParams& p, double y) { return y * (p.max - p.min) + p.min; }

std::vector<double> transform(const ScalerParams& p, std::span<const double> values) {
    std::vector<double> out;
    out.reserve(values.size());
    for (double v : values) out.push_back(transform(p, v));
    return out;
}

std::vector<double> inverse_transform(const ScalerParams& p, std::span<const double> values) {
    std::vector<double> out;
    out.reserve(values.size());
    for (double v : values) out.push_back(inverse_transform(p, v));
    return out;
}

std::vector<double> difference(std::span<const double> values, int d) {
    if (d < 0) throw InsufficientData("difference: negative order");
    if (static_cast<int>(values.size()) <= d)
        throw InsufficientData("difference: need more than " + std::to_string(d) + " values");
    std::vector<double> out(values.begin(), values.end());
    for (int pass = 0; pass < d; ++pass) {
        for (std::size_t i = 0; i + 1 < out.size(); ++i) out[i] = out[i + 1] - out[i];
        out.pop_back();
    }
    return out;
}

std::vector<double> undifference(std::span<const double> last_originals,
                                 std::span<const double> diffs, int d) {
    if (d < 0) throw InsufficientData("undifference: negative order");
    if (static_cast<int>(last_originals.size()) != d)
        throw InsufficientData("undifference: need exactly d trailing originals");
    if (d == 0) return {diffs.begin(), diffs.end()};

    // Reintegrate level by level: first rebuild the continuation of the
    // (d-1)-times differenced series, then cumulate it onto the last original.
    std::vector<double> lower_last = d > 1
        ? difference(last_originals, 1)
        : std::vector<double>{};
    std::vector<double> lower = undifference(lower_last, diffs, d - 1);

    std::vector<double> out;
    out.reserve(lower.size());
    double acc = last_originals.back();
    for (double v : lower) {
        acc += v;
        out.push_back(acc);
    }
    return out;
}

WindowedDataset make_windows(std::span<const double> values, int lookback) {
    if (lookback < 1) throw InsufficientData("make_windows: lookback must be positive");
    if (values.size() <= static_cast<std::size_t>(lookback))
        throw InsufficientData("make_windows: need more than lookback values");
    WindowedDataset ds;
    ds.lookback = lookback;
    const std::size_t count = values.size() - static_cast<std::size_t>(lookback);
    ds.inputs.reserve(count);
    ds.targets.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        ds.inputs.emplace_back(values.begin() + i, values.begin() + i + lookback);
        ds.targets.push_back(values[i + lookback]);
    }
    return ds;
}

SplitDataset chrono_split(const WindowedDataset& ds, double ratio) {
    if (!(ratio > 0.0 && ratio < 1.0)) throw InsufficientData("chrono_split: ratio must be in (0,1)");
    const std::size_t n = ds.size();
    const std::size_t n_train = static_cast<std::size_t>(std::floor(ratio * static_cast<double>(n)));
    if (n_train == 0 || n_train == n)
        throw InsufficientData("chrono_split: split leaves an empty partition");

    SplitDataset split;
    split.split_ratio = ratio;
    split.train.lookback = ds.lookback;
    split.test.lookback = ds.lookback;
    split.train.inputs.assign(ds.inputs.begin(), ds.inputs.begin() + n_train);
    split.train.targets.assign(ds.targets.begin(), ds.targets.begin() + n_train);
    split.test.inputs.assign(ds.inputs.begin() + n_train, ds.inputs.end());
    split.test.targets.assign(ds.targets.begin() + n_train, ds.targets.end());
    return split;
}

}  // namespace fincast::preprocess
