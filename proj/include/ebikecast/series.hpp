#pragma once

// Core time-series transforms: log, order-k differencing and its inverse,
// rolling window statistics, and sample autocorrelation.

#include <span>
#include <vector>

#include "ebikecast/monthly.hpp"

namespace ebikecast::series {

enum class TransformKind { raw, log, diff };

/// Records an applied transform so forecasts can be mapped back to level
/// units. For diff, anchor holds the order-many values needed to invert.
struct TransformTag {
    TransformKind kind = TransformKind::raw;
    int order = 0;
    std::vector<double> anchor;

    static TransformTag raw() { return {}; }
    static TransformTag log() { return {TransformKind::log, 0, {}}; }
    static TransformTag diff(int order, std::vector<double> anchor) {
        return {TransformKind::diff, order, std::move(anchor)};
    }
};

/// Maps values back through a recorded transform: exp for log, seeded
/// cumulative sums for diff (anchor length must equal the order), identity
/// for raw.
std::vector<double> invert(const TransformTag& tag, std::span<const double> values);

struct Differenced {
    std::vector<double> values;
    std::vector<double> anchor;  // one leading value per differencing stage
};

/// Elementwise natural log; every value must be strictly positive.
MonthlySeries log_transform(const MonthlySeries& s);
std::vector<double> log_transform(std::span<const double> values);

/// Applies order consecutive first differences. Requires length > order.
/// The anchor holds the first element of each intermediate stage, in the
/// order the stages were produced, so undifference can rebuild the input.
Differenced difference(std::span<const double> values, int order);

/// Inverse of difference; anchor length fixes the order.
/// undifference(difference(s, k)) == s up to floating-point rounding.
std::vector<double> undifference(std::span<const double> values,
                                 std::span<const double> anchor);

/// As above but validates the anchor against a known differencing order.
std::vector<double> undifference(std::span<const double> values,
                                 std::span<const double> anchor, int order);

enum class RollingStat { mean, std, sum };

/// Trailing-window statistic, aligned to the window end: output[i] covers
/// values[i .. i+window-1] and has length size - window + 1. std is the
/// sample standard deviation (divisor window - 1; 0 when window == 1).
std::vector<double> rolling(std::span<const double> values, std::size_t window,
                            RollingStat stat);

/// Sample autocorrelations r_1..r_max_lag with the shared-mean, divisor-n
/// estimator: r_j = sum_t (x_t - m)(x_{t+j} - m) / sum_t (x_t - m)^2.
/// Requires a nonconstant series with max_lag < length.
std::vector<double> autocorrelation(std::span<const double> values, std::size_t max_lag);

}  // namespace ebikecast::series
