#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace perfquant {

// Base of every error thrown by this library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Malformed input data: ragged or mis-sized shapes, non-finite values,
// incompatible hierarchies.
class ValidationError : public Error {
public:
    using Error::Error;
};

// A parameter outside its mathematical domain (alpha, quantile probability,
// thresholds, cost ratios, ...).
class DomainError : public Error {
public:
    using Error::Error;
};

// A variance estimate was requested for a level with a single repetition.
class UndefinedVarianceError : public Error {
public:
    UndefinedVarianceError(std::size_t level, const std::string& what)
        : Error(what), level_(level) {}
    std::size_t level() const { return level_; }

private:
    std::size_t level_;
};

// The Fieller boundedness condition failed: the denominator mean is not
// significantly nonzero, so no finite interval exists.
class UnboundedIntervalError : public Error {
public:
    using Error::Error;
};

// A bootstrap iteration produced a zero denominator mean.
class DegenerateDenominatorError : public Error {
public:
    DegenerateDenominatorError(std::size_t iteration, const std::string& what)
        : Error(what), iteration_(iteration) {}
    std::size_t iteration() const { return iteration_; }

private:
    std::size_t iteration_;
};

// The experiment budget cannot accommodate the minimum repetition counts.
class InfeasibleBudgetError : public Error {
public:
    using Error::Error;
};

}  // namespace perfquant
