#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace perfquant {

// Balanced nested benchmark measurements.
//
// `shape` lists the repetition counts from the highest experiment level down
// to the lowest (e.g. binaries, executions, measurements); `values` is
// row-major with the highest level varying slowest. Levels are numbered
// 1 (lowest, individual measurements) through levels() (highest), so the
// count for level i is shape[levels() - i].
//
// Instances are immutable after construction and safe to share across
// threads.
class Hierarchy {
public:
    static Hierarchy build(std::vector<std::size_t> shape,
                           std::vector<double> values,
                           std::vector<std::string> level_names = {});

    std::size_t levels() const { return shape_.size(); }  // n + 1
    std::size_t ways() const { return shape_.size() - 1; }  // n
    std::size_t total() const { return values_.size(); }

    // Repetition count n_i for level i in [1, levels()].
    std::size_t count_at(std::size_t level) const;

    const std::vector<std::size_t>& shape() const { return shape_; }
    std::span<const double> values() const { return values_; }
    const std::vector<std::string>& level_names() const { return level_names_; }

private:
    Hierarchy() = default;

    std::vector<std::size_t> shape_;
    std::vector<double> values_;
    std::vector<std::string> level_names_;

    friend Hierarchy collapse_level(const Hierarchy&, std::size_t);
};

// Arithmetic mean of all measurements.
double grand_mean(const Hierarchy& h);

// Means with every index at and below `level` averaged out, ordered
// row-major by the remaining indices; length is the product of the counts
// above `level`. level_means(h, h.levels()) is the single-element grand
// mean.
std::vector<double> level_means(const Hierarchy& h, std::size_t level);

// Merges `level` (2 <= level <= levels()) into the level below it: the two
// repetition counts multiply and the flat value order is untouched, so all
// order-insensitive statistics are preserved.
Hierarchy collapse_level(const Hierarchy& h, std::size_t level);

}  // namespace perfquant
