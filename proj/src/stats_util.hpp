#pragma once

#include <cstddef>
#include <span>

namespace perfquant::detail {

inline double mean_of(std::span<const double> xs) {
    // Constant data must average to the constant bitwise; summation would
    // round non-dyadic values (e.g. 25 copies of 0.95).
    bool constant = true;
    for (double x : xs) {
        if (x != xs.front()) {
            constant = false;
            break;
        }
    }
    if (constant) return xs.front();
    double sum = 0.0;
    for (double x : xs) sum += x;
    return sum / static_cast<double>(xs.size());
}

// Two-pass sample variance with divisor (n - 1); stable for data with tiny
// relative spread around a large mean.
inline double sample_variance(std::span<const double> xs) {
    const double m = mean_of(xs);
    double ss = 0.0;
    for (double x : xs) {
        const double d = x - m;
        ss += d * d;
    }
    return ss / static_cast<double>(xs.size() - 1);
}

}  // namespace perfquant::detail
