#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"
#include "oracles.hpp"
#include "perfquant/errors.hpp"
#include "perfquant/estimators.hpp"
#include "perfquant/hierarchy.hpp"
#include "perfquant/rng.hpp"
#include "perfquant/simulation.hpp"

using namespace perfquant;

namespace {

Hierarchy three_level() {
    return Hierarchy::build({3, 2, 2}, {9, 5, 8, 3, 10, 6, 7, 11, 1, 12, 2, 4});
}

// Composes the elementary mean/variance reductions over a 3-level tensor in
// a given op order (index 0 = binaries, 1 = executions, 2 = measurements;
// 'V' at exactly one position). Independent of the library's cascade.
double reduce_three_level(const std::vector<double>& values, std::size_t binaries,
                          std::size_t executions, std::size_t measurements, std::size_t v_at) {
    std::vector<std::vector<std::vector<double>>> tensor(
        binaries, std::vector<std::vector<double>>(executions));
    std::size_t flat = 0;
    for (std::size_t b = 0; b < binaries; ++b)
        for (std::size_t e = 0; e < executions; ++e)
            for (std::size_t m = 0; m < measurements; ++m)
                tensor[b][e].push_back(values[flat++]);

    std::vector<std::vector<double>> level2(binaries);
    for (std::size_t b = 0; b < binaries; ++b)
        for (std::size_t e = 0; e < executions; ++e)
            level2[b].push_back(v_at == 2 ? oracles::var_of(tensor[b][e])
                                          : oracles::mean_of(tensor[b][e]));
    std::vector<double> level3(binaries);
    for (std::size_t b = 0; b < binaries; ++b)
        level3[b] = v_at == 1 ? oracles::var_of(level2[b]) : oracles::mean_of(level2[b]);
    return v_at == 0 ? oracles::var_of(level3) : oracles::mean_of(level3);
}

}  // namespace

TEST_SUITE("estimators") {

TEST_CASE("three-level worked example variances") {
    const auto s = biased_variance_estimates(three_level());
    REQUIRE(s.size() == 3);
    CHECK(s[0] == doctest::Approx(16.5).epsilon(1e-12));
    CHECK(s[1] == doctest::Approx(7.75 / 3.0).epsilon(1e-12));  // 2.5833..., shown as 2.6
    CHECK(s[2] == doctest::Approx(3.5625).epsilon(1e-12));
}

TEST_CASE("two-level transform of the worked example") {
    const auto s = biased_variance_estimates(collapse_level(three_level(), 2));
    REQUIRE(s.size() == 2);
    CHECK(s[0] == doctest::Approx(12.722222222222221).epsilon(1e-12));
    CHECK(s[1] == doctest::Approx(3.5625).epsilon(1e-12));
}

TEST_CASE("constant hierarchy has zero variance at every level") {
    const Hierarchy h = Hierarchy::build({2, 2, 2}, std::vector<double>(8, 5.0));
    for (double s : biased_variance_estimates(h)) CHECK(s == 0.0);
}

TEST_CASE("single-repetition levels are rejected by name") {
    const Hierarchy h = Hierarchy::build({3, 1, 2}, {1, 2, 3, 4, 5, 6});
    CHECK_THROWS_WITH_AS(biased_variance_estimates(h), doctest::Contains("level 2"),
                         UndefinedVarianceError);
    try {
        biased_variance_estimates(h);
    } catch (const UndefinedVarianceError& e) {
        CHECK(e.level() == 2);
    }
}

TEST_CASE("unbiased estimates of the worked example flag level 2") {
    const auto d = unbiased_variance_estimates(biased_variance_estimates(three_level()),
                                               {3, 2, 2});
    REQUIRE(d.t_squared.size() == 3);
    CHECK(d.t_squared[0] == doctest::Approx(16.5).epsilon(1e-12));
    CHECK(d.t_squared[1] == doctest::Approx(7.75 / 3.0 - 8.25).epsilon(1e-12));  // -5.667
    CHECK(d.t_squared[2] == doctest::Approx(3.5625 - 7.75 / 6.0).epsilon(1e-12));  // 2.271
    CHECK(d.nonpositive_levels == std::set<std::size_t>{2});
}

TEST_CASE("unbiased estimates of the two-level transform") {
    const auto d = unbiased_variance_estimates({12.722222222222221, 3.5625}, {3, 4});
    CHECK(d.t_squared[0] == doctest::Approx(12.722222222222221).epsilon(1e-12));
    CHECK(d.t_squared[1] == doctest::Approx(0.38194444444444464).epsilon(1e-9));  // shown as 0.4
    CHECK(d.nonpositive_levels.empty());
}

TEST_CASE("all-zero variances flag every level above the first") {
    const auto d = unbiased_variance_estimates({0.0, 0.0, 0.0, 0.0}, {2, 2, 2, 2});
    for (double t : d.t_squared) CHECK(t == 0.0);
    CHECK(d.nonpositive_levels == std::set<std::size_t>{2, 3, 4});
}

TEST_CASE("unbiased estimates validate input lengths") {
    CHECK_THROWS_AS(unbiased_variance_estimates({1.0, 2.0}, {2}), ValidationError);
    CHECK_THROWS_AS(unbiased_variance_estimates({}, {}), ValidationError);
}

TEST_CASE("variance of the mean for the comparison example old system") {
    const Hierarchy h =
        Hierarchy::build({3, 2, 2}, {9, 11, 5, 6, 16, 13, 12, 8, 15, 7, 10, 14});
    CHECK(mean_variance_estimate(h) == doctest::Approx(5.8125 / 3.0).epsilon(1e-12));
}

TEST_CASE("variance of the mean edge cases") {
    CHECK(mean_variance_estimate(Hierarchy::build({2, 3}, std::vector<double>(6, 2.0))) == 0.0);
    // Top-level means (1,2,3): sample variance 1, estimate 1/3.
    const Hierarchy tops = Hierarchy::build({3, 1}, {1, 2, 3});
    CHECK(mean_variance_estimate(tops) == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
    CHECK_THROWS_AS(mean_variance_estimate(Hierarchy::build({1, 4}, {1, 2, 3, 4})),
                    UndefinedVarianceError);
}

TEST_CASE("general formula matches the MMV/MVM/VMM reductions") {
    std::mt19937 gen(101);
    std::uniform_real_distribution<double> value(0.5, 20.0);
    for (int rep = 0; rep < 25; ++rep) {
        const std::size_t b = 2 + gen() % 4, e = 2 + gen() % 4, m = 2 + gen() % 4;
        std::vector<double> values(b * e * m);
        for (auto& v : values) v = value(gen);
        const Hierarchy h = Hierarchy::build({b, e, m}, values);
        const auto s = biased_variance_estimates(h);
        CHECK(s[0] == doctest::Approx(reduce_three_level(values, b, e, m, 2)).epsilon(1e-12));
        CHECK(s[1] == doctest::Approx(reduce_three_level(values, b, e, m, 1)).epsilon(1e-12));
        CHECK(s[2] == doctest::Approx(reduce_three_level(values, b, e, m, 0)).epsilon(1e-12));
    }
}

TEST_CASE("permuting sub-trees leaves the estimates unchanged") {
    std::mt19937 gen(55);
    std::uniform_real_distribution<double> value(0.0, 5.0);
    std::vector<double> values(3 * 2 * 4);
    for (auto& v : values) v = value(gen);
    const auto baseline = biased_variance_estimates(Hierarchy::build({3, 2, 4}, values));

    // Swap binaries 0 and 2 (blocks of 8), then executions inside binary 1.
    std::vector<double> permuted = values;
    std::swap_ranges(permuted.begin(), permuted.begin() + 8, permuted.begin() + 16);
    std::swap_ranges(permuted.begin() + 8, permuted.begin() + 12, permuted.begin() + 12);
    const auto shuffled = biased_variance_estimates(Hierarchy::build({3, 2, 4}, permuted));
    for (std::size_t i = 0; i < baseline.size(); ++i)
        CHECK(shuffled[i] == doctest::Approx(baseline[i]).epsilon(1e-12));
}

TEST_CASE("scaling the data scales every estimate quadratically") {
    std::mt19937 gen(77);
    std::uniform_real_distribution<double> value(1.0, 9.0);
    std::vector<double> values(2 * 3 * 2);
    for (auto& v : values) v = value(gen);
    const double a = 3.75;
    std::vector<double> scaled = values;
    for (auto& v : scaled) v *= a;

    const auto d0 = variance_decomposition(Hierarchy::build({2, 3, 2}, values));
    const auto d1 = variance_decomposition(Hierarchy::build({2, 3, 2}, scaled));
    for (std::size_t i = 0; i < d0.s_squared.size(); ++i) {
        CHECK(d1.s_squared[i] == doctest::Approx(a * a * d0.s_squared[i]).epsilon(1e-12));
        CHECK(d1.t_squared[i] == doctest::Approx(a * a * d0.t_squared[i]).epsilon(1e-12));
    }
}

TEST_CASE("Monte-Carlo unbiasedness of the estimators") {
    // sigma^2 = (0.64, 0.25, 0.09), shape 6 x 5 x 4.
    HierarchicalNormalModel model;
    model.mu = 5.0;
    model.sigmas = {0.8, 0.5, 0.3};
    const std::vector<std::size_t> shape = {6, 5, 4};
    const std::size_t replicates = 4000;

    std::vector<std::vector<double>> s_samples(3), t_samples(3);
    std::vector<double> mean_var_samples;
    for (std::size_t r = 0; r < replicates; ++r) {
        PhiloxStream stream(2024, substream_id(0, r, 0));
        const Hierarchy h = generate_hierarchical_normal(model, shape, stream);
        const auto d = variance_decomposition(h);
        for (std::size_t i = 0; i < 3; ++i) {
            s_samples[i].push_back(d.s_squared[i]);
            t_samples[i].push_back(d.t_squared[i]);
        }
        mean_var_samples.push_back(mean_variance_estimate(h));
    }

    const auto check_mc = [&](const std::vector<double>& samples, double target) {
        const double mean = oracles::mean_of(samples);
        const double se = std::sqrt(oracles::var_of(samples) / samples.size());
        CHECK(std::fabs(mean - target) <= 3.0 * se);
    };

    const double v1 = 0.64, v2 = 0.25, v3 = 0.09;
    const double n1 = 4, n2 = 5, n3 = 6;
    check_mc(s_samples[0], v1);
    check_mc(s_samples[1], v2 + v1 / n1);
    check_mc(s_samples[2], v3 + v2 / n2 + v1 / (n1 * n2));
    check_mc(t_samples[0], v1);
    check_mc(t_samples[1], v2);
    check_mc(t_samples[2], v3);
    check_mc(mean_var_samples, v3 / n3 + v2 / (n2 * n3) + v1 / (n1 * n2 * n3));
}

}  // TEST_SUITE
