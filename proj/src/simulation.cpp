#include "perfquant/simulation.hpp"

#include <cmath>
#include <optional>
#include <string>
#include <utility>

#include "perfquant/errors.hpp"
#include "perfquant/estimators.hpp"

namespace perfquant {

namespace {

void check_options(const SimulationOptions& options) {
    if (options.iterations < 1) throw DomainError("simulation needs at least 1 iteration");
    if (!(options.alpha > 0.0 && options.alpha < 1.0))
        throw DomainError("alpha must lie strictly between 0 and 1");
}

double mc_std_error(double p, std::size_t n) {
    if (n == 0) return 0.0;
    return std::sqrt(p * (1.0 - p) / static_cast<double>(n));
}

// Builds the 1-alpha ratio interval for one simulated comparison, or
// nothing when the Fieller boundedness condition fails.
std::optional<ConfidenceInterval> ratio_interval(const Hierarchy& old_system,
                                                 const Hierarchy& new_system, RatioMethod method,
                                                 const SimulationOptions& options,
                                                 std::uint64_t iteration) {
    try {
        switch (method) {
            case RatioMethod::fieller:
                return ratio_ci_fieller(old_system, new_system, options.alpha,
                                        TailDistribution::student_t);
            case RatioMethod::fieller_normal:
                return ratio_ci_fieller(old_system, new_system, options.alpha,
                                        TailDistribution::normal);
            case RatioMethod::bootstrap: {
                PhiloxStream derive(options.seed, substream_id(0, iteration, 2));
                BootstrapConfig config;
                config.iterations = options.bootstrap_iterations;
                config.alpha = options.alpha;
                config.strategy = options.strategy;
                config.seed = derive.next_u64();
                return ratio_ci_bootstrap(old_system, new_system, config);
            }
        }
    } catch (const UnboundedIntervalError&) {
        return std::nullopt;
    }
    throw DomainError("unknown ratio method");
}

}  // namespace

RatioMethod parse_ratio_method(const std::string& name) {
    if (name == "fieller") return RatioMethod::fieller;
    if (name == "fieller-normal") return RatioMethod::fieller_normal;
    if (name == "bootstrap") return RatioMethod::bootstrap;
    throw DomainError("unknown ratio method '" + name + "' (fieller|fieller-normal|bootstrap)");
}

std::string to_string(RatioMethod method) {
    switch (method) {
        case RatioMethod::fieller: return "fieller";
        case RatioMethod::fieller_normal: return "fieller-normal";
        case RatioMethod::bootstrap: return "bootstrap";
    }
    return "unknown";
}

Hierarchy generate_hierarchical_normal(const HierarchicalNormalModel& model,
                                       const std::vector<std::size_t>& shape,
                                       RandomStream& rng) {
    if (shape.empty()) throw ValidationError("shape must name at least one level");
    if (model.sigmas.size() != shape.size())
        throw ValidationError("model has " + std::to_string(model.sigmas.size()) +
                              " sigmas but the shape has " + std::to_string(shape.size()) +
                              " levels");
    if (!std::isfinite(model.mu)) throw DomainError("model mean must be finite");
    for (double s : model.sigmas)
        if (!(s >= 0.0)) throw DomainError("sigmas must be nonnegative");

    std::size_t total = 1;
    for (std::size_t n : shape) total *= n;
    std::vector<double> values;
    values.reserve(total);

    const std::size_t depth_count = shape.size();
    auto descend = [&](auto&& self, std::size_t depth, double parent_mean) -> void {
        // Level at this depth is (n+1) - depth, so its sigma sits at index
        // depth_count - 1 - depth of the lowest-first sigma list.
        const double sigma = model.sigmas[depth_count - 1 - depth];
        const std::size_t n = shape[depth];
        for (std::size_t j = 0; j < n; ++j) {
            const double m = rng.next_normal(parent_mean, sigma);
            if (depth + 1 == depth_count) {
                values.push_back(m);
            } else {
                self(self, depth + 1, m);
            }
        }
    };
    descend(descend, 0, model.mu);
    return Hierarchy::build(shape, std::move(values));
}

SimulationReport false_alarm_rate(const Hierarchy& source, RatioMethod method,
                                  std::size_t binaries, const std::vector<double>& thresholds,
                                  const SimulationOptions& options) {
    check_options(options);
    if (thresholds.empty()) throw DomainError("false-alarm grid needs at least one threshold");
    for (double t : thresholds)
        if (t < 0.0) throw DomainError("thresholds must be nonnegative");
    const std::size_t source_top = source.count_at(source.levels());
    if (source_top < 2)
        throw ValidationError("false-alarm source needs at least 2 top-level groups");
    if (binaries < 2) throw DomainError("false-alarm comparison needs at least 2 binaries");

    const std::size_t subtree = source.total() / source_top;
    std::vector<std::size_t> system_shape = source.shape();
    system_shape[0] = binaries;
    const auto source_values = source.values();

    // Draws whole top-level sub-trees only; lower levels stay intact.
    auto draw_system = [&](RandomStream& rng) {
        std::vector<double> values;
        values.reserve(binaries * subtree);
        for (std::size_t b = 0; b < binaries; ++b) {
            const std::size_t pick = rng.next_index(source_top);
            values.insert(values.end(), source_values.begin() + pick * subtree,
                          source_values.begin() + (pick + 1) * subtree);
        }
        return Hierarchy::build(system_shape, std::move(values));
    };

    std::vector<std::size_t> detections(thresholds.size(), 0);
    std::size_t excluded = 0;
    for (std::size_t i = 0; i < options.iterations; ++i) {
        PhiloxStream stream_old(options.seed, substream_id(0, i, 0));
        PhiloxStream stream_new(options.seed, substream_id(0, i, 1));
        const Hierarchy old_system = draw_system(stream_old);
        const Hierarchy new_system = draw_system(stream_new);
        const auto ci = ratio_interval(old_system, new_system, method, options, i);
        if (!ci) {
            ++excluded;
            continue;
        }
        for (std::size_t t = 0; t < thresholds.size(); ++t)
            if (threshold_decision(*ci, thresholds[t]).detected) ++detections[t];
    }

    SimulationReport report;
    report.kind = SimulationReport::Kind::false_alarm;
    report.seed = options.seed;
    const std::size_t effective = options.iterations - excluded;
    for (std::size_t t = 0; t < thresholds.size(); ++t) {
        SimulationCell cell;
        cell.shape = system_shape;
        cell.parameter = thresholds[t];
        cell.method = method;
        cell.iterations = options.iterations;
        cell.excluded = excluded;
        cell.estimate = effective == 0
                            ? 0.0
                            : static_cast<double>(detections[t]) / static_cast<double>(effective);
        cell.std_error = mc_std_error(cell.estimate, effective);
        report.cells.push_back(std::move(cell));
    }
    return report;
}

SimulationReport coverage(const HierarchicalNormalModel& old_model, double theta,
                          RatioMethod method, const std::vector<std::size_t>& shape,
                          const SimulationOptions& options) {
    check_options(options);
    if (!(theta > 0.0) || !std::isfinite(theta))
        throw DomainError("theta must be a positive finite ratio");

    HierarchicalNormalModel new_model = old_model;
    new_model.mu = theta * old_model.mu;  // same sigmas for both systems

    std::size_t covered = 0;
    std::size_t excluded = 0;
    for (std::size_t i = 0; i < options.iterations; ++i) {
        PhiloxStream stream_old(options.seed, substream_id(0, i, 0));
        PhiloxStream stream_new(options.seed, substream_id(0, i, 1));
        const Hierarchy old_system = generate_hierarchical_normal(old_model, shape, stream_old);
        const Hierarchy new_system = generate_hierarchical_normal(new_model, shape, stream_new);
        const auto ci = ratio_interval(old_system, new_system, method, options, i);
        if (!ci) {
            ++excluded;
            continue;
        }
        if (ci->lower <= theta && theta <= ci->upper) ++covered;
    }

    SimulationReport report;
    report.kind = SimulationReport::Kind::coverage;
    report.seed = options.seed;
    const std::size_t effective = options.iterations - excluded;
    SimulationCell cell;
    cell.shape = shape;
    cell.parameter = theta;
    cell.method = method;
    cell.iterations = options.iterations;
    cell.excluded = excluded;
    cell.estimate =
        effective == 0 ? 0.0 : static_cast<double>(covered) / static_cast<double>(effective);
    cell.std_error = mc_std_error(cell.estimate, effective);
    report.cells.push_back(std::move(cell));
    return report;
}

}  // namespace perfquant
