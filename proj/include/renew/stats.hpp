#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <vector>

#include "renew/error.hpp"

namespace renew {

/// Linearly interpolated order statistic (position (n - 1) * p in the sorted sample).
[[nodiscard]] inline double quantile(std::vector<double> values, double p) {
    if (values.empty()) fail("quantile of an empty sample");
    std::sort(values.begin(), values.end());
    const double h = (static_cast<double>(values.size()) - 1.0) * std::clamp(p, 0.0, 1.0);
    const auto lo = static_cast<std::size_t>(std::floor(h));
    const std::size_t hi = std::min(lo + 1, values.size() - 1);
    return values[lo] + (h - static_cast<double>(lo)) * (values[hi] - values[lo]);
}

[[nodiscard]] inline double harmonic_mean(std::span<const double> values) {
    if (values.empty()) fail("harmonic mean of an empty sample");
    double inv = 0.0;
    for (const double v : values) inv += 1.0 / v;
    return static_cast<double>(values.size()) / inv;
}

[[nodiscard]] inline double sample_stddev(std::span<const double> values) {
    if (values.size() < 2) return 0.0;
    double m = 0.0;
    for (const double v : values) m += v;
    m /= static_cast<double>(values.size());
    double s = 0.0;
    for (const double v : values) s += (v - m) * (v - m);
    return std::sqrt(s / static_cast<double>(values.size() - 1));
}

}  // namespace renew
