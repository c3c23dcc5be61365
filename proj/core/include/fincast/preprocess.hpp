#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace fincast::preprocess {

/// Min/max pair backing the 0-1 normalization and its inverse.
/// Invariant: max > min (enforced by fit_scaler).
struct ScalerParams {
    double min = 0.0;
    double max = 1.0;
};

/// Scans the extremes of `values`. Throws DegenerateRange when all values
/// are equal and NonFiniteValue when any value is NaN or infinite.
ScalerParams fit_scaler(std::span<const double> values);

/// (x - min) / (max - min). Out-of-range x is allowed; the result may leave
/// [0, 1], which iterative forecasting relies on.
double transform(const ScalerParams& p, double x);
/// y * (max - min) + min.
double inverse_transform(const ScalerParams& p, double y);

std::vector<double> transform(const ScalerParams& p, std::span<const double> values);
std::vector<double> inverse_transform(const ScalerParams& p, std::span<const double> values);

/// Applies the first difference d times; output length = input length - d.
std::vector<double> difference(std::span<const double> values, int d);

/// Inverse of `difference`: cumulatively reintegrates `diffs` onto the end of
/// a series whose final d original-scale values are `last_originals`.
/// undifference(v[0..d), difference(v, d), d) == v[d..).
std::vector<double> undifference(std::span<const double> last_originals,
                                 std::span<const double> diffs, int d);

/// Sliding input windows with single-step targets:
/// inputs[i] = values[i .. i+lookback), targets[i] = values[i+lookback].
struct WindowedDataset {
    std::vector<std::vector<double>> inputs;
    std::vector<double> targets;
    int lookback = 0;

    std::size_t size() const { return inputs.size(); }
};

WindowedDataset make_windows(std::span<const double> values, int lookback);

/// Chronological train/test partition; no shuffling across the boundary.
struct SplitDataset {
    WindowedDataset train;
    WindowedDataset test;
    double split_ratio = 0.0;
};

/// First floor(ratio * n) windows go to train, the rest to test.
/// Throws InsufficientData when either side would be empty.
SplitDataset chrono_split(const WindowedDataset& ds, double ratio);

}  // namespace fincast::preprocess
