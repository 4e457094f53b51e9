#include "perfquant/planner.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "perfquant/errors.hpp"
#include "perfquant/intervals.hpp"

namespace perfquant {

namespace {

std::size_t ceil_count(double value) {
    const auto count = static_cast<std::size_t>(std::ceil(value));
    return std::max<std::size_t>(1, count);
}

}  // namespace

double total_cost(const std::vector<std::size_t>& counts, const CostModel& cost_model) {
    if (counts.empty()) throw ValidationError("total cost needs at least one repetition count");
    if (cost_model.costs.size() + 1 != counts.size())
        throw ValidationError("cost model has " + std::to_string(cost_model.costs.size()) +
                              " costs but " + std::to_string(counts.size()) +
                              " counts were given; expected one cost per level above the lowest");
    double acc = static_cast<double>(counts[0]);
    for (std::size_t k = 1; k < counts.size(); ++k)
        acc = (cost_model.costs[k - 1] + acc) * static_cast<double>(counts[k]);
    return acc;
}

std::vector<std::size_t> optimal_counts(const std::vector<double>& variances,
                                        const CostModel& cost_model) {
    if (variances.empty()) throw ValidationError("optimal counts need at least one variance");
    if (cost_model.costs.size() + 1 != variances.size())
        throw ValidationError("cost model has " + std::to_string(cost_model.costs.size()) +
                              " costs but " + std::to_string(variances.size()) +
                              " variances were given; expected one cost per level above the lowest");
    if (cost_model.costs.empty()) return {};  // flat design: only the top count exists
    for (std::size_t i = 0; i < variances.size(); ++i) {
        if (!(variances[i] > 0.0))
            throw DomainError("nonpositive variance at retained level " + std::to_string(i + 1) +
                              "; drop the level before planning");
    }
    for (double c : cost_model.costs)
        if (c < 0.0) throw DomainError("costs must be nonnegative");

    const std::size_t ways = cost_model.costs.size();
    std::vector<std::size_t> counts(ways);
    for (std::size_t i = 1; i <= ways; ++i) {
        double cost_ratio;
        if (i == 1) {
            cost_ratio = cost_model.costs[0];
        } else {
            const double prev = cost_model.costs[i - 2];
            const double cur = cost_model.costs[i - 1];
            if (prev == 0.0) {
                if (cur != 0.0)
                    throw DomainError("cost ratio c_" + std::to_string(i) + "/c_" +
                                      std::to_string(i - 1) + " is undefined: c_" +
                                      std::to_string(i - 1) + " = 0");
                // Both repetitions free: nothing to trade off.
                counts[i - 1] = 1;
                continue;
            }
            cost_ratio = cur / prev;
        }
        counts[i - 1] = ceil_count(std::sqrt(cost_ratio * variances[i - 1] / variances[i]));
    }
    return counts;
}

double precision_objective(const std::vector<std::size_t>& counts,
                           const std::vector<double>& variances) {
    if (counts.size() != variances.size())
        throw ValidationError("precision objective needs one count per variance; got " +
                              std::to_string(counts.size()) + " counts and " +
                              std::to_string(variances.size()) + " variances");
    if (counts.empty()) throw ValidationError("precision objective of an empty design");
    double objective = 0.0;
    double denom = 1.0;
    for (std::size_t i = counts.size(); i > 0; --i) {
        denom *= static_cast<double>(counts[i - 1]);
        objective += variances[i - 1] / denom;
    }
    return objective;
}

ExperimentPlan plan_experiment(const Hierarchy& pilot, const CostModel& cost_model,
                               const PlanOptions& options) {
    if (cost_model.costs.size() != pilot.ways())
        throw ValidationError("pilot has " + std::to_string(pilot.levels()) +
                              " levels; expected " + std::to_string(pilot.ways()) +
                              " costs, got " + std::to_string(cost_model.costs.size()));
    if (cost_model.budget && !(*cost_model.budget > 0.0))
        throw DomainError("budget must be positive");
    if (!(options.alpha > 0.0 && options.alpha < 1.0))
        throw DomainError("alpha must lie strictly between 0 and 1");

    ExperimentPlan plan;
    Hierarchy working = pilot;
    std::vector<double> costs = cost_model.costs;

    auto estimate = [&](const Hierarchy& h) {
        VarianceDecomposition d = variance_decomposition(h);
        if (options.assume_t_equals_s) {
            d.t_squared = d.s_squared;
            d.nonpositive_levels.clear();
            for (std::size_t i = 2; i <= d.s_squared.size(); ++i)
                if (d.s_squared[i - 1] <= 0.0) d.nonpositive_levels.insert(i);
        }
        return d;
    };

    VarianceDecomposition decomposition = estimate(working);
    while (!decomposition.nonpositive_levels.empty()) {
        // Collapse the highest flagged level first; every collapse changes
        // the estimates below it, so recompute before the next decision.
        const std::size_t level = *decomposition.nonpositive_levels.rbegin();
        plan.dropped_levels.push_back(level);
        working = collapse_level(working, level);
        if (!costs.empty()) {
            const std::size_t cost_index = std::min(level - 1, costs.size() - 1);
            costs.erase(costs.begin() + static_cast<std::ptrdiff_t>(cost_index));
        }
        decomposition = estimate(working);
    }

    const std::vector<double>& planning_variances = decomposition.t_squared;
    CostModel final_costs{costs, cost_model.budget};
    plan.counts = optimal_counts(planning_variances, final_costs);

    if (working.levels() == 1 && !plan.dropped_levels.empty())
        plan.warnings.push_back(
            "every upper level showed nonpositive unbiased variance; the experiment reduces "
            "to a flat single-level design");
    if (decomposition.s_squared[0] == 0.0)
        plan.warnings.push_back("pilot shows zero variance at the lowest level");

    for (std::size_t i = 0; i < plan.counts.size(); ++i) {
        if (plan.counts[i] < 5)
            plan.warnings.push_back("planned count n_" + std::to_string(i + 1) + " = " +
                                    std::to_string(plan.counts[i]) +
                                    " is below 5; estimates at such small counts are fragile");
    }

    std::size_t top_count = working.count_at(working.levels());
    if (cost_model.budget) {
        std::vector<std::size_t> per_unit_counts = plan.counts;
        per_unit_counts.push_back(1);
        const double unit_cost = total_cost(per_unit_counts, final_costs);
        const auto affordable = static_cast<std::size_t>(std::floor(*cost_model.budget / unit_cost));
        if (affordable < 2)
            throw InfeasibleBudgetError(
                "budget " + std::to_string(*cost_model.budget) + " buys " +
                std::to_string(affordable) + " top-level repetitions at " +
                std::to_string(unit_cost) + " each; at least 2 are required");
        plan.top_count = affordable;
        top_count = affordable;
        if (affordable < 5)
            plan.warnings.push_back("planned top-level count " + std::to_string(affordable) +
                                    " is below 5; estimates at such small counts are fragile");
    }

    if (top_count >= 2) {
        std::vector<std::size_t> full_counts = plan.counts;
        full_counts.push_back(top_count);
        const double objective = precision_objective(full_counts, planning_variances);
        const double mean = grand_mean(working);
        if (mean != 0.0) {
            const double q = t_quantile(1.0 - options.alpha / 2.0,
                                        static_cast<unsigned>(top_count - 1));
            plan.predicted_halfwidth = q * std::sqrt(objective) / std::abs(mean);
        } else {
            plan.warnings.push_back(
                "relative half-width undefined: the pilot grand mean is zero");
        }
    } else {
        plan.warnings.push_back(
            "predicted half-width unavailable: fewer than 2 top-level repetitions");
    }

    plan.decomposition = decomposition;
    plan.cost_model = final_costs;
    return plan;
}

}  // namespace perfquant
