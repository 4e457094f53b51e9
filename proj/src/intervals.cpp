#include "perfquant/intervals.hpp"

#include <boost/math/distributions/normal.hpp>
#include <boost/math/distributions/students_t.hpp>
#include <cmath>
#include <string>

#include "perfquant/errors.hpp"
#include "perfquant/estimators.hpp"

namespace perfquant {

namespace {

void check_alpha(double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0))
        throw DomainError("alpha must lie strictly between 0 and 1");
}

double upper_tail_quantile(TailDistribution dist, double alpha, std::size_t n_top) {
    const double p = 1.0 - alpha / 2.0;
    if (dist == TailDistribution::student_t)
        return t_quantile(p, static_cast<unsigned>(n_top - 1));
    return normal_quantile(p);
}

}  // namespace

std::string to_string(IntervalMethod method) {
    switch (method) {
        case IntervalMethod::asymptotic_t: return "asymptotic-t";
        case IntervalMethod::asymptotic_normal: return "asymptotic-normal";
        case IntervalMethod::fieller: return "fieller";
        case IntervalMethod::bootstrap_percentile: return "bootstrap-percentile";
    }
    return "unknown";
}

double t_quantile(double p, unsigned dof) {
    if (!(p > 0.0 && p < 1.0)) throw DomainError("t quantile probability must be in (0,1)");
    if (dof < 1) throw DomainError("t quantile needs at least 1 degree of freedom");
    return boost::math::quantile(boost::math::students_t_distribution<double>(dof), p);
}

double normal_quantile(double p) {
    if (!(p > 0.0 && p < 1.0)) throw DomainError("normal quantile probability must be in (0,1)");
    return boost::math::quantile(boost::math::normal_distribution<double>(), p);
}

ConfidenceInterval mean_ci_asymptotic(const Hierarchy& h, double alpha, TailDistribution dist) {
    check_alpha(alpha);
    const std::size_t n_top = h.count_at(h.levels());
    if (n_top < 2)
        throw UndefinedVarianceError(h.levels(),
                                     "mean interval needs at least 2 top-level repetitions");
    const double q = upper_tail_quantile(dist, alpha, n_top);
    const double center = grand_mean(h);
    const double halfwidth = q * std::sqrt(mean_variance_estimate(h));

    ConfidenceInterval ci;
    ci.lower = center - halfwidth;
    ci.upper = center + halfwidth;
    ci.confidence = 1.0 - alpha;
    ci.method = dist == TailDistribution::student_t ? IntervalMethod::asymptotic_t
                                                    : IntervalMethod::asymptotic_normal;
    ci.point_estimate = center;
    return ci;
}

ConfidenceInterval ratio_ci_fieller(const Hierarchy& old_system, const Hierarchy& new_system,
                                    double alpha, TailDistribution dist) {
    check_alpha(alpha);
    if (old_system.shape() != new_system.shape())
        throw ValidationError("systems have different shapes; the comparison needs identical "
                              "repetition counts at every level");
    const std::size_t n_top = old_system.count_at(old_system.levels());
    if (n_top < 2)
        throw UndefinedVarianceError(old_system.levels(),
                                     "ratio interval needs at least 2 top-level repetitions");

    const double q = upper_tail_quantile(dist, alpha, n_top);
    const double q2 = q * q;
    const double x = grand_mean(old_system);  // denominator system
    const double y = grand_mean(new_system);
    const double vx = mean_variance_estimate(old_system);
    const double vy = mean_variance_estimate(new_system);

    const double denom = x * x - q2 * vx;
    if (denom <= 0.0)
        throw UnboundedIntervalError(
            "denominator mean not significantly nonzero -- unbounded interval");
    const double xy = x * y;
    const double discriminant = xy * xy - denom * (y * y - q2 * vy);
    if (discriminant < 0.0)
        throw UnboundedIntervalError(
            "negative Fieller discriminant -- unbounded interval");
    const double root = std::sqrt(discriminant);

    ConfidenceInterval ci;
    ci.lower = (xy - root) / denom;
    ci.upper = (xy + root) / denom;
    ci.confidence = 1.0 - alpha;
    ci.method = IntervalMethod::fieller;
    ci.point_estimate = y / x;
    return ci;
}

ChangeDecision threshold_decision(const ConfidenceInterval& ci, double threshold) {
    if (threshold < 0.0) throw DomainError("threshold must be nonnegative");
    ChangeDecision decision;
    decision.threshold = threshold;
    decision.interval = ci;
    decision.detected = ci.lower > 1.0 + threshold || ci.upper < 1.0 - threshold;
    return decision;
}

}  // namespace perfquant
