#include "ebikecast/series.hpp"

#include <algorithm>
#include <cmath>

#include "ebikecast/error.hpp"
#include "ebikecast/kernels.hpp"

namespace ebikecast::series {

MonthlySeries log_transform(const MonthlySeries& s) {
    return MonthlySeries(s.first_key(), log_transform(s.values()));
}

std::vector<double> log_transform(std::span<const double> values) {
    std::vector<double> out;
    out.reserve(values.size());
    for (double v : values) {
        if (!(v > 0.0)) {
            throw Error(errc::precondition, "log transform requires strictly positive values");
        }
        out.push_back(std::log(v));
    }
    return out;
}

std::vector<double> invert(const TransformTag& tag, std::span<const double> values) {
    switch (tag.kind) {
        case TransformKind::raw:
            return std::vector<double>(values.begin(), values.end());
        case TransformKind::log: {
            std::vector<double> out(values.begin(), values.end());
            for (double& v : out) v = std::exp(v);
            return out;
        }
        case TransformKind::diff:
            return undifference(values, tag.anchor, tag.order);
    }
    throw Error(errc::precondition, "unknown transform kind");
}

Differenced difference(std::span<const double> values, int order) {
    if (order < 0) throw Error(errc::precondition, "differencing order must be >= 0");
    if (values.size() <= static_cast<std::size_t>(order)) {
        throw Error(errc::precondition, "series too short to difference");
    }
    Differenced out;
    out.values.assign(values.begin(), values.end());
    out.anchor.reserve(static_cast<std::size_t>(order));
    for (int stage = 0; stage < order; ++stage) {
        out.anchor.push_back(out.values.front());
        for (std::size_t i = 0; i + 1 < out.values.size(); ++i) {
            out.values[i] = out.values[i + 1] - out.values[i];
        }
        out.values.pop_back();
    }
    return out;
}

std::vector<double> undifference(std::span<const double> values,
                                 std::span<const double> anchor) {
    // Anchors were recorded outermost first; integrate innermost first.
    std::vector<double> out(values.begin(), values.end());
    for (std::size_t stage = anchor.size(); stage-- > 0;) {
        std::vector<double> levels;
        levels.reserve(out.size() + 1);
        double level = anchor[stage];
        levels.push_back(level);
        for (double step : out) {
            level += step;
            levels.push_back(level);
        }
        out = std::move(levels);
    }
    return out;
}

std::vector<double> undifference(std::span<const double> values,
                                 std::span<const double> anchor, int order) {
    if (order < 0 || anchor.size() != static_cast<std::size_t>(order)) {
        throw Error(errc::precondition, "anchor length does not match differencing order");
    }
    return undifference(values, anchor);
}

std::vector<double> rolling(std::span<const double> values, std::size_t window,
                            RollingStat stat) {
    if (window < 1 || window > values.size()) {
        throw Error(errc::precondition, "rolling window out of range");
    }
    const std::size_t n_out = values.size() - window + 1;
    std::vector<double> out(n_out);

    // Prefix sums keep each window O(1) and every backend bit-identical.
    std::vector<double> prefix(values.size() + 1, 0.0);
    for (std::size_t i = 0; i < values.size(); ++i) prefix[i + 1] = prefix[i] + values[i];

    if (stat == RollingStat::sum || stat == RollingStat::mean) {
        const double inv = stat == RollingStat::mean ? 1.0 / static_cast<double>(window) : 1.0;
        for (std::size_t i = 0; i < n_out; ++i) {
            out[i] = (prefix[i + window] - prefix[i]) * inv;
        }
        return out;
    }

    std::vector<double> prefix_sq(values.size() + 1, 0.0);
    for (std::size_t i = 0; i < values.size(); ++i) {
        prefix_sq[i + 1] = prefix_sq[i] + values[i] * values[i];
    }
    for (std::size_t i = 0; i < n_out; ++i) {
        if (window == 1) {
            out[i] = 0.0;
            continue;
        }
        const double s = prefix[i + window] - prefix[i];
        const double s2 = prefix_sq[i + window] - prefix_sq[i];
        const double ss = s2 - s * s / static_cast<double>(window);
        out[i] = std::sqrt(std::max(ss, 0.0) / static_cast<double>(window - 1));
    }
    return out;
}

std::vector<double> autocorrelation(std::span<const double> values, std::size_t max_lag) {
    const std::size_t n = values.size();
    if (n < 2) throw Error(errc::precondition, "autocorrelation needs at least 2 points");
    if (max_lag < 1 || max_lag >= n) {
        throw Error(errc::precondition, "autocorrelation max_lag out of range");
    }
    const double mean = kernels::sum(values) / static_cast<double>(n);
    std::vector<double> centered(n);
    for (std::size_t i = 0; i < n; ++i) centered[i] = values[i] - mean;

    const double denom = kernels::dot(centered, centered);
    if (denom == 0.0) {
        throw Error(errc::degenerate, "autocorrelation undefined for a constant series");
    }
    std::vector<double> r(max_lag);
    const std::span<const double> c(centered);
    for (std::size_t j = 1; j <= max_lag; ++j) {
        r[j - 1] = kernels::dot(c.subspan(0, n - j), c.subspan(j)) / denom;
    }
    return r;
}

}  // namespace ebikecast::series
