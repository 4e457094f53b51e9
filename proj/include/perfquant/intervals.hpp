#pragma once

#include <string>

#include "perfquant/hierarchy.hpp"

namespace perfquant {

enum class IntervalMethod {
    asymptotic_t,
    asymptotic_normal,
    fieller,
    bootstrap_percentile,
};

std::string to_string(IntervalMethod method);

// Quantile source for the parametric intervals. Student's t is the
// conservative default; the normal variant exists for the asymptotic
// comparison and yields intervals that are never wider.
enum class TailDistribution { student_t, normal };

struct ConfidenceInterval {
    double lower = 0.0;
    double upper = 0.0;
    double confidence = 0.0;  // 1 - alpha
    IntervalMethod method = IntervalMethod::asymptotic_t;
    double point_estimate = 0.0;
};

struct ChangeDecision {
    bool detected = false;
    double threshold = 0.0;
    ConfidenceInterval interval;
};

// p-quantile of Student's t with `dof` degrees of freedom.
double t_quantile(double p, unsigned dof);

// p-quantile of the standard normal distribution.
double normal_quantile(double p);

// Ybar +- q * sqrt(S^2_{n+1} / n_{n+1}) with q the 1-alpha/2 quantile of the
// chosen distribution at nu = n_{n+1} - 1 degrees of freedom. Zero-variance
// data yields a degenerate width-0 interval.
ConfidenceInterval mean_ci_asymptotic(const Hierarchy& h, double alpha,
                                      TailDistribution dist = TailDistribution::student_t);

// Fieller interval for theta = mean(new) / mean(old) with independent
// systems (zero covariance) and nu = n_{n+1} - 1. Both hierarchies must
// share one shape. Throws UnboundedIntervalError when the denominator mean
// is not significantly nonzero (t^2 >= Obar^2 / v_O) or the discriminant
// turns negative.
ConfidenceInterval ratio_ci_fieller(const Hierarchy& old_system, const Hierarchy& new_system,
                                    double alpha,
                                    TailDistribution dist = TailDistribution::student_t);

// A change is detected only when the whole interval lies above 1+threshold
// or below 1-threshold.
ChangeDecision threshold_decision(const ConfidenceInterval& ci, double threshold);

}  // namespace perfquant
