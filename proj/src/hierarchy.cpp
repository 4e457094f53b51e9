#include "perfquant/hierarchy.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <utility>

#include "perfquant/errors.hpp"
#include "stats_util.hpp"

namespace perfquant {

namespace {

std::string shape_to_string(const std::vector<std::size_t>& shape) {
    std::ostringstream out;
    out << "(";
    for (std::size_t i = 0; i < shape.size(); ++i) {
        if (i > 0) out << ",";
        out << shape[i];
    }
    out << ")";
    return out.str();
}

}  // namespace

Hierarchy Hierarchy::build(std::vector<std::size_t> shape, std::vector<double> values,
                           std::vector<std::string> level_names) {
    if (shape.empty()) throw ValidationError("hierarchy shape must name at least one level");
    std::size_t expected = 1;
    for (std::size_t n : shape) {
        if (n == 0) throw ValidationError("hierarchy shape entries must be >= 1");
        if (n > std::numeric_limits<std::size_t>::max() / expected)
            throw ValidationError("hierarchy shape product overflows");
        expected *= n;
    }
    if (values.size() != expected) {
        std::ostringstream msg;
        msg << "ragged or mis-sized input: shape " << shape_to_string(shape) << " expects "
            << expected << " values, got " << values.size();
        throw ValidationError(msg.str());
    }
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (!std::isfinite(values[i]))
            throw ValidationError("non-finite value at flat index " + std::to_string(i));
    }
    if (!level_names.empty() && level_names.size() != shape.size())
        throw ValidationError("level_names length must match shape length");

    Hierarchy h;
    h.shape_ = std::move(shape);
    h.values_ = std::move(values);
    h.level_names_ = std::move(level_names);
    return h;
}

std::size_t Hierarchy::count_at(std::size_t level) const {
    if (level < 1 || level > levels())
        throw DomainError("level " + std::to_string(level) + " out of range [1, " +
                          std::to_string(levels()) + "]");
    return shape_[levels() - level];
}

double grand_mean(const Hierarchy& h) {
    return detail::mean_of(h.values());
}

std::vector<double> level_means(const Hierarchy& h, std::size_t level) {
    if (level < 1 || level > h.levels())
        throw DomainError("level " + std::to_string(level) + " out of range [1, " +
                          std::to_string(h.levels()) + "]");
    std::size_t block = 1;
    for (std::size_t i = 1; i <= level; ++i) block *= h.count_at(i);
    const std::size_t groups = h.total() / block;
    const auto values = h.values();

    std::vector<double> means(groups);
    for (std::size_t g = 0; g < groups; ++g)
        means[g] = detail::mean_of(values.subspan(g * block, block));
    return means;
}

Hierarchy collapse_level(const Hierarchy& h, std::size_t level) {
    if (h.levels() < 2) throw DomainError("cannot collapse a single-level hierarchy");
    if (level < 2 || level > h.levels())
        throw DomainError("collapse level " + std::to_string(level) + " out of range [2, " +
                          std::to_string(h.levels()) + "]");

    const std::size_t pos = h.levels() - level;  // top-first index of n_level
    Hierarchy out;
    out.shape_ = h.shape_;
    out.shape_[pos + 1] *= out.shape_[pos];
    out.shape_.erase(out.shape_.begin() + static_cast<std::ptrdiff_t>(pos));
    out.values_ = h.values_;
    if (!h.level_names_.empty()) {
        out.level_names_ = h.level_names_;
        out.level_names_.erase(out.level_names_.begin() + static_cast<std::ptrdiff_t>(pos));
    }
    return out;
}

}  // namespace perfquant
