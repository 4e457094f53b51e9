#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "perfquant/estimators.hpp"
#include "perfquant/hierarchy.hpp"

namespace perfquant {

// Repetition costs c_1..c_n in units of single measurements: c_1 is the
// warm-up discarded per execution, c_i the setup cost of one repetition at
// level i+1 (e.g. c_2 = measurements' worth of time to build one binary).
// `budget`, when set, caps the total experiment cost in the same unit.
struct CostModel {
    std::vector<double> costs;
    std::optional<double> budget;
};

struct ExperimentPlan {
    // Planned n_1..n_n for the retained design, lowest level first.
    std::vector<std::size_t> counts;
    // n_{n+1}, derived from the budget when one is given.
    std::optional<std::size_t> top_count;
    // Levels removed because T^2 <= 0, in removal order; indices refer to
    // the design as it stood when the level was dropped.
    std::vector<std::size_t> dropped_levels;
    // Relative 1-alpha CI half-width predicted at the planned counts.
    std::optional<double> predicted_halfwidth;
    // Estimates and costs for the final retained design.
    VarianceDecomposition decomposition;
    CostModel cost_model;
    std::vector<std::string> warnings;
};

// Total cost c = (c_n + ...(c_2 + (c_1 + n_1) n_2) n_3 ...) n_{n+1}.
// `counts` holds n_1..n_{n+1} lowest level first; costs.size() must be
// counts.size() - 1.
double total_cost(const std::vector<std::size_t>& counts, const CostModel& costs);

// Optimal repetition counts n_1..n_n (ceiling-rounded, forced >= 1):
// n_1 = ceil(sqrt(c_1 v_1 / v_2)), n_i = ceil(sqrt((c_i/c_{i-1}) v_i /
// v_{i+1})). `variances` holds v_1..v_{n+1} lowest level first; every
// retained variance must be positive.
std::vector<std::size_t> optimal_counts(const std::vector<double>& variances,
                                        const CostModel& costs);

// The precision objective f = sum_i v_i / prod_{k=i..n+1} n_k, i.e. the
// variance of the grand mean at those counts.
double precision_objective(const std::vector<std::size_t>& counts,
                           const std::vector<double>& variances);

struct PlanOptions {
    bool assume_t_equals_s = false;  // plan from S^2 instead of T^2
    double alpha = 0.05;             // confidence for the predicted half-width
};

// Full dimensioning pass over a pilot experiment: estimate S^2/T^2,
// iteratively collapse the highest level with T^2 <= 0 (removing that
// level's cost, keeping lower warm-up costs), then apply optimal_counts.
// With a budget, n_{n+1} = floor(budget / cost-per-top-level-unit) and must
// come out >= 2.
ExperimentPlan plan_experiment(const Hierarchy& pilot, const CostModel& cost_model,
                               const PlanOptions& options = {});

}  // namespace perfquant
