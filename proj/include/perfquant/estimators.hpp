#pragma once

#include <cstddef>
#include <set>
#include <vector>

#include "perfquant/hierarchy.hpp"

namespace perfquant {

// Per-level variance estimates for a hierarchy. `s_squared` holds the
// biased estimators S^2_1..S^2_{n+1} (always nonnegative), `t_squared` the
// unbiased estimators T^2_1..T^2_{n+1} which may turn negative at levels
// whose random effect contributes little. `nonpositive_levels` lists the
// levels i >= 2 with T^2_i <= 0 -- the candidates for removal from the
// experiment. Level 1 is never listed; it cannot be removed.
struct VarianceDecomposition {
    std::vector<double> s_squared;
    std::vector<double> t_squared;
    std::set<std::size_t> nonpositive_levels;
    std::vector<std::size_t> shape;
};

// S^2_1..S^2_{n+1}, lowest level first. S^2_1 is the mean over all
// lowest-level groups of the within-group sample variance; S^2_i for i >= 2
// is the mean over all level-(i+1) groups of the sample variance of the
// level-i means; S^2_{n+1} is the sample variance of the top-level means.
// Sample variances use divisor (count - 1), so every level needs at least
// two repetitions.
std::vector<double> biased_variance_estimates(const Hierarchy& h);

// Applies T^2_1 = S^2_1 and T^2_i = S^2_i - S^2_{i-1} / n_{i-1}. Negative
// values are reported, never clamped; deciding what to do with them is the
// planner's job.
VarianceDecomposition unbiased_variance_estimates(const std::vector<double>& s_squared,
                                                  const std::vector<std::size_t>& shape);

// Both steps in one call.
VarianceDecomposition variance_decomposition(const Hierarchy& h);

// S^2_{n+1} / n_{n+1}: the unbiased estimate of the variance of the grand
// mean. Only requires n_{n+1} >= 2.
double mean_variance_estimate(const Hierarchy& h);

}  // namespace perfquant
