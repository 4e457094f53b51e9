#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "perfquant/bootstrap.hpp"
#include "perfquant/hierarchy.hpp"
#include "perfquant/rng.hpp"

namespace perfquant {

// Hierarchical normal data model: means at every level are normal around
// the mean of the level above. `sigmas` holds the per-level standard
// deviations sigma_1..sigma_{n+1}, lowest level first.
struct HierarchicalNormalModel {
    double mu = 1.0;
    std::vector<double> sigmas;
};

enum class RatioMethod {
    fieller,         // parametric, Student's t quantiles
    fieller_normal,  // parametric, standard normal quantiles
    bootstrap,       // hierarchical percentile bootstrap
};

RatioMethod parse_ratio_method(const std::string& name);
std::string to_string(RatioMethod method);

struct SimulationCell {
    std::vector<std::size_t> shape;  // highest level first
    double parameter = 0.0;          // threshold (false-alarm) or theta (coverage)
    RatioMethod method = RatioMethod::fieller;
    std::size_t iterations = 0;  // requested per cell
    std::size_t excluded = 0;    // Fieller condition violations, not in the denominator
    double estimate = 0.0;
    double std_error = 0.0;  // Monte-Carlo standard error sqrt(p(1-p)/n)
};

struct SimulationReport {
    enum class Kind { false_alarm, coverage };
    Kind kind = Kind::false_alarm;
    std::vector<SimulationCell> cells;
    std::uint64_t seed = 0;
};

// Draws a balanced hierarchy from the model: top-level means come from
// N(mu, sigma^2_{n+1}), each child mean from N(parent, sigma^2_level),
// leaves from N(parent, sigma^2_1). Draw order is depth-first.
Hierarchy generate_hierarchical_normal(const HierarchicalNormalModel& model,
                                       const std::vector<std::size_t>& shape,
                                       RandomStream& rng);

struct SimulationOptions {
    std::size_t iterations = 1000;
    double alpha = 0.05;
    std::uint64_t seed = 0;
    // Settings for the nested bootstrap when method == bootstrap.
    std::size_t bootstrap_iterations = 1000;
    ResamplingStrategy strategy = ResamplingStrategy::rrr();
};

// Same-system comparison: each iteration draws two independent
// with-replacement samples of `binaries` top-level sub-trees from `source`,
// builds the 1-alpha ratio interval, and evaluates the change decision at
// every threshold. Any detection is a false alarm. Fieller condition
// violations are counted in `excluded` and left out of the rate.
SimulationReport false_alarm_rate(const Hierarchy& source, RatioMethod method,
                                  std::size_t binaries, const std::vector<double>& thresholds,
                                  const SimulationOptions& options);

// Coverage of the ratio interval under a known truth: old data comes from
// `old_model`, new data from the same model with mean theta * mu and
// identical sigmas. The estimate is the fraction of intervals containing
// theta.
SimulationReport coverage(const HierarchicalNormalModel& old_model, double theta,
                          RatioMethod method, const std::vector<std::size_t>& shape,
                          const SimulationOptions& options);

}  // namespace perfquant
