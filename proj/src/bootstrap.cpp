#include "perfquant/bootstrap.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "perfquant/errors.hpp"
#include "stats_util.hpp"

namespace perfquant {

namespace {

void check_config(const BootstrapConfig& config) {
    if (config.iterations < 2) throw DomainError("bootstrap needs at least 2 iterations");
    if (!(config.alpha > 0.0 && config.alpha < 1.0))
        throw DomainError("alpha must lie strictly between 0 and 1");
}

// Resamples into `out` without constructing a Hierarchy; `out` ends up with
// h.total() values in the original row-major layout.
void resample_into(const Hierarchy& h, const ResamplingStrategy& strategy, RandomStream& rng,
                   std::vector<double>& out) {
    out.clear();
    out.reserve(h.total());
    const auto values = h.values();

    if (strategy.is_flat()) {
        const std::size_t n = h.total();
        for (std::size_t i = 0; i < n; ++i) out.push_back(values[rng.next_index(n)]);
        return;
    }

    const auto flags = strategy.replacement_flags(h.levels());
    const auto& shape = h.shape();
    std::vector<std::size_t> child_block(shape.size());
    child_block.back() = 1;
    for (std::size_t d = shape.size() - 1; d > 0; --d)
        child_block[d - 1] = child_block[d] * shape[d];
    // child_block[d] = values spanned by one group at depth d+1; a group at
    // depth d spans shape[d] * child_block[d] values.

    std::vector<std::size_t> draws;
    auto emit = [&](auto&& self, std::size_t depth, std::size_t base) -> void {
        const std::size_t n = shape[depth];
        const std::size_t first = draws.size();
        for (std::size_t j = 0; j < n; ++j)
            draws.push_back(flags[depth] ? rng.next_index(n) : j);
        if (depth + 1 == shape.size()) {
            for (std::size_t j = 0; j < n; ++j) out.push_back(values[base + draws[first + j]]);
        } else {
            for (std::size_t j = 0; j < n; ++j)
                self(self, depth + 1, base + draws[first + j] * child_block[depth]);
        }
        draws.resize(first);
    };
    emit(emit, 0, 0);
}

}  // namespace

ResamplingStrategy ResamplingStrategy::rrr() { return ResamplingStrategy(Kind::rrr); }
ResamplingStrategy ResamplingStrategy::rrn() { return ResamplingStrategy(Kind::rrn); }
ResamplingStrategy ResamplingStrategy::rnn() { return ResamplingStrategy(Kind::rnn); }
ResamplingStrategy ResamplingStrategy::flat() { return ResamplingStrategy(Kind::flat); }

ResamplingStrategy ResamplingStrategy::custom(std::vector<bool> per_level_replacement) {
    if (per_level_replacement.empty())
        throw DomainError("custom resampling strategy needs at least one level flag");
    ResamplingStrategy s(Kind::custom);
    s.custom_ = std::move(per_level_replacement);
    return s;
}

ResamplingStrategy ResamplingStrategy::parse(const std::string& name) {
    if (name == "rrr") return rrr();
    if (name == "rrn") return rrn();
    if (name == "rnn") return rnn();
    if (name == "flat") return flat();
    throw DomainError("unknown resampling strategy '" + name + "' (rrr|rrn|rnn|flat)");
}

std::vector<bool> ResamplingStrategy::replacement_flags(std::size_t levels) const {
    if (levels == 0) throw DomainError("a hierarchy has at least one level");
    switch (kind_) {
        case Kind::rrr:
            return std::vector<bool>(levels, true);
        case Kind::rrn: {
            std::vector<bool> flags(levels, true);
            flags.back() = false;
            return flags;
        }
        case Kind::rnn: {
            std::vector<bool> flags(levels, false);
            flags.front() = true;
            return flags;
        }
        case Kind::custom:
            if (custom_.size() != levels)
                throw ValidationError("strategy names " + std::to_string(custom_.size()) +
                                      " levels but the hierarchy has " + std::to_string(levels));
            return custom_;
        case Kind::flat:
            break;
    }
    throw DomainError("FLAT strategy has no per-level flags");
}

std::string ResamplingStrategy::name() const {
    switch (kind_) {
        case Kind::rrr: return "rrr";
        case Kind::rrn: return "rrn";
        case Kind::rnn: return "rnn";
        case Kind::flat: return "flat";
        case Kind::custom: {
            std::string out = "custom:";
            for (bool f : custom_) out += f ? 'R' : 'N';
            return out;
        }
    }
    return "unknown";
}

Hierarchy resample(const Hierarchy& h, const ResamplingStrategy& strategy, RandomStream& rng) {
    std::vector<double> values;
    resample_into(h, strategy, rng, values);
    return Hierarchy::build(h.shape(), std::move(values), h.level_names());
}

std::pair<double, double> percentile_interval(std::vector<double> samples, double alpha) {
    if (samples.size() < 2)
        throw DomainError(samples.empty() ? "percentile interval of an empty sample set"
                                          : "percentile interval needs at least 2 samples");
    if (!(alpha > 0.0 && alpha < 1.0))
        throw DomainError("alpha must lie strictly between 0 and 1");
    std::sort(samples.begin(), samples.end());
    const auto b = static_cast<double>(samples.size());
    // upper rank = ceil((1 - alpha/2) B) = B - floor((alpha/2) B), computed
    // from the same product as the lower rank so the two stay consistent.
    const auto offset = static_cast<std::size_t>(std::floor(alpha / 2.0 * b));
    const std::size_t lower_rank = std::max<std::size_t>(1, offset);
    const std::size_t upper_rank = samples.size() - offset;
    return {samples[lower_rank - 1], samples[upper_rank - 1]};
}

ConfidenceInterval mean_ci_bootstrap(const Hierarchy& h, const BootstrapConfig& config) {
    check_config(config);
    std::vector<double> means(config.iterations);
    std::vector<double> scratch;
    for (std::size_t i = 0; i < config.iterations; ++i) {
        PhiloxStream stream(config.seed, substream_id(0, i, 0));
        resample_into(h, config.strategy, stream, scratch);
        means[i] = detail::mean_of(scratch);
    }
    const auto [lower, upper] = percentile_interval(std::move(means), config.alpha);

    ConfidenceInterval ci;
    ci.lower = lower;
    ci.upper = upper;
    ci.confidence = 1.0 - config.alpha;
    ci.method = IntervalMethod::bootstrap_percentile;
    ci.point_estimate = grand_mean(h);
    return ci;
}

ConfidenceInterval ratio_ci_bootstrap(const Hierarchy& old_system, const Hierarchy& new_system,
                                      const BootstrapConfig& config) {
    check_config(config);
    if (old_system.shape() != new_system.shape())
        throw ValidationError("systems have different shapes; the comparison needs identical "
                              "repetition counts at every level");
    std::vector<double> ratios(config.iterations);
    std::vector<double> scratch;
    for (std::size_t i = 0; i < config.iterations; ++i) {
        PhiloxStream stream_old(config.seed, substream_id(0, i, 0));
        PhiloxStream stream_new(config.seed, substream_id(0, i, 1));
        resample_into(old_system, config.strategy, stream_old, scratch);
        const double mean_old = detail::mean_of(scratch);
        resample_into(new_system, config.strategy, stream_new, scratch);
        const double mean_new = detail::mean_of(scratch);
        if (mean_old == 0.0)
            throw DegenerateDenominatorError(
                i, "degenerate denominator in bootstrap iteration " + std::to_string(i));
        ratios[i] = mean_new / mean_old;
    }
    const auto [lower, upper] = percentile_interval(std::move(ratios), config.alpha);

    ConfidenceInterval ci;
    ci.lower = lower;
    ci.upper = upper;
    ci.confidence = 1.0 - config.alpha;
    ci.method = IntervalMethod::bootstrap_percentile;
    ci.point_estimate = grand_mean(new_system) / grand_mean(old_system);
    return ci;
}

}  // namespace perfquant
