#include "perfquant/estimators.hpp"

#include <string>
#include <utility>
#include <vector>

#include "perfquant/errors.hpp"
#include "stats_util.hpp"

namespace perfquant {

std::vector<double> biased_variance_estimates(const Hierarchy& h) {
    const std::size_t levels = h.levels();
    for (std::size_t i = 1; i <= levels; ++i) {
        if (h.count_at(i) < 2)
            throw UndefinedVarianceError(
                i, "variance undefined at level " + std::to_string(i) +
                       ": the level has a single repetition");
    }

    // Mean/variance reduction cascade: at each level take per-group sample
    // variances of the current means, then replace the means by the
    // per-group averages and move one level up.
    std::vector<double> s(levels);
    std::vector<double> current(h.values().begin(), h.values().end());
    for (std::size_t i = 1; i <= levels; ++i) {
        const std::size_t n = h.count_at(i);
        const std::size_t groups = current.size() / n;
        std::vector<double> means(groups);
        double variance_sum = 0.0;
        for (std::size_t g = 0; g < groups; ++g) {
            std::span<const double> group(current.data() + g * n, n);
            variance_sum += detail::sample_variance(group);
            means[g] = detail::mean_of(group);
        }
        s[i - 1] = variance_sum / static_cast<double>(groups);
        current = std::move(means);
    }
    return s;
}

VarianceDecomposition unbiased_variance_estimates(const std::vector<double>& s_squared,
                                                  const std::vector<std::size_t>& shape) {
    if (s_squared.empty()) throw ValidationError("no variance estimates given");
    if (s_squared.size() != shape.size())
        throw ValidationError("s_squared length " + std::to_string(s_squared.size()) +
                              " does not match shape length " + std::to_string(shape.size()));

    const std::size_t levels = shape.size();
    VarianceDecomposition out;
    out.s_squared = s_squared;
    out.shape = shape;
    out.t_squared.resize(levels);
    out.t_squared[0] = s_squared[0];
    for (std::size_t i = 2; i <= levels; ++i) {
        const auto n_below = static_cast<double>(shape[levels - (i - 1)]);
        out.t_squared[i - 1] = s_squared[i - 1] - s_squared[i - 2] / n_below;
        if (out.t_squared[i - 1] <= 0.0) out.nonpositive_levels.insert(i);
    }
    return out;
}

VarianceDecomposition variance_decomposition(const Hierarchy& h) {
    return unbiased_variance_estimates(biased_variance_estimates(h), h.shape());
}

double mean_variance_estimate(const Hierarchy& h) {
    const std::size_t top = h.levels();
    const std::size_t n_top = h.count_at(top);
    if (n_top < 2)
        throw UndefinedVarianceError(
            top, "variance of the mean undefined: a single repetition at the top level");
    std::vector<double> tops;
    if (h.levels() == 1) {
        tops.assign(h.values().begin(), h.values().end());
    } else {
        tops = level_means(h, top - 1);
    }
    return detail::sample_variance(tops) / static_cast<double>(n_top);
}

}  // namespace perfquant
