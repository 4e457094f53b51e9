#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "perfquant/hierarchy.hpp"
#include "perfquant/intervals.hpp"
#include "perfquant/rng.hpp"

namespace perfquant {

// Which levels draw group indices with replacement during hierarchical
// resampling, highest level first. Levels without replacement keep their
// sub-trees intact under whichever ancestor was drawn. FLAT ignores the
// hierarchy and pools every measurement.
class ResamplingStrategy {
public:
    static ResamplingStrategy rrr();   // replacement at all levels
    static ResamplingStrategy rrn();   // all but the lowest level
    static ResamplingStrategy rnn();   // highest level only
    static ResamplingStrategy flat();  // pooled, structure ignored
    static ResamplingStrategy custom(std::vector<bool> per_level_replacement);
    static ResamplingStrategy parse(const std::string& name);

    bool is_flat() const { return kind_ == Kind::flat; }

    // Per-level replacement flags (highest first) resolved for a hierarchy
    // with `levels` levels. Invalid for FLAT.
    std::vector<bool> replacement_flags(std::size_t levels) const;

    std::string name() const;

private:
    enum class Kind { rrr, rrn, rnn, flat, custom };
    explicit ResamplingStrategy(Kind kind) : kind_(kind) {}

    Kind kind_;
    std::vector<bool> custom_;
};

struct BootstrapConfig {
    std::size_t iterations = 1000;
    double alpha = 0.05;
    ResamplingStrategy strategy = ResamplingStrategy::rrr();
    std::uint64_t seed = 0;
};

// One simulated experiment: same shape as the input, values drawn from it
// according to `strategy`. Index draws happen top-down; at each node with
// replacement the child indices are drawn as a block before descending.
Hierarchy resample(const Hierarchy& h, const ResamplingStrategy& strategy, RandomStream& rng);

// Percentile bounds of a simulated statistic: with B samples sorted
// ascending the lower bound is the max(1, floor((alpha/2)*B))-th value and
// the upper bound the (B - floor((alpha/2)*B))-th, ranks 1-based. For
// B = 1000 and alpha = 0.05 these are the 25th and 975th ordered values.
std::pair<double, double> percentile_interval(std::vector<double> samples, double alpha);

// Percentile bootstrap interval for the mean of one system. Iteration i
// draws from Philox substream (seed, cell 0, iteration i, lane 0), so equal
// inputs and config give bit-identical results.
ConfidenceInterval mean_ci_bootstrap(const Hierarchy& h, const BootstrapConfig& config);

// Percentile bootstrap interval for mean(new)/mean(old). The two systems
// are resampled independently per iteration (lanes 0 and 1).
ConfidenceInterval ratio_ci_bootstrap(const Hierarchy& old_system, const Hierarchy& new_system,
                                      const BootstrapConfig& config);

}  // namespace perfquant
