#include <cstdint>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "perfquant/bootstrap.hpp"
#include "perfquant/dataset.hpp"
#include "perfquant/errors.hpp"
#include "perfquant/estimators.hpp"
#include "perfquant/hierarchy.hpp"
#include "perfquant/intervals.hpp"
#include "perfquant/planner.hpp"
#include "perfquant/report.hpp"
#include "perfquant/rng.hpp"
#include "perfquant/simulation.hpp"

namespace {

using nlohmann::json;
using namespace perfquant;

constexpr int kExitOk = 0;
constexpr int kExitError = 2;
constexpr int kExitChangeDetected = 10;

// Every report carries the same key set; inapplicable entries stay null.
json base_report(const std::string& command) {
    return json{
        {"command", command},          {"input_shape", nullptr},
        {"grand_mean", nullptr},       {"variance_decomposition", nullptr},
        {"interval", nullptr},         {"decision", nullptr},
        {"plan", nullptr},             {"simulation", nullptr},
        {"warnings", json::array()},   {"seed", nullptr},
        {"config", json::object()},
    };
}

std::optional<DatasetFormat> parse_format(const std::string& name) {
    if (name.empty()) return std::nullopt;
    if (name == "csv") return DatasetFormat::csv;
    if (name == "json") return DatasetFormat::json;
    throw DomainError("unknown input format '" + name + "' (csv|json)");
}

Hierarchy load_input(const std::string& path, const std::string& format_name,
                     double warmup_fraction) {
    Hierarchy h = load_dataset(path, parse_format(format_name));
    if (warmup_fraction > 0.0) h = drop_warmup(h, warmup_fraction);
    return h;
}

json decomposition_or_null(const Hierarchy& h, json& warnings) {
    try {
        return to_json(variance_decomposition(h));
    } catch (const UndefinedVarianceError& e) {
        warnings.push_back(std::string("variance decomposition unavailable: ") + e.what());
        return nullptr;
    }
}

void emit(const json& report) { std::cout << report.dump(2) << "\n"; }

std::uint64_t derive_cell_seed(std::uint64_t seed, std::size_t cell) {
    PhiloxStream stream(seed, substream_id(cell, 0, 7));
    return stream.next_u64();
}

struct SummarizeArgs {
    std::string input, input_format;
    std::string method = "asymptotic";
    double alpha = 0.05;
    double warmup = 0.0;
    std::size_t iterations = 1000;
    std::string strategy = "rrr";
    std::uint64_t seed = 0;
};

int run_summarize(const SummarizeArgs& args) {
    const Hierarchy h = load_input(args.input, args.input_format, args.warmup);
    json report = base_report("summarize");
    report["input_shape"] = shape_json(h.shape());
    report["grand_mean"] = grand_mean(h);
    report["variance_decomposition"] = decomposition_or_null(h, report["warnings"]);

    ConfidenceInterval ci;
    if (args.method == "bootstrap") {
        BootstrapConfig config;
        config.iterations = args.iterations;
        config.alpha = args.alpha;
        config.strategy = ResamplingStrategy::parse(args.strategy);
        config.seed = args.seed;
        if (h.count_at(h.levels()) < 2)
            report["warnings"].push_back(
                "a single top-level repetition cannot reflect top-level variation; the "
                "bootstrap interval only covers lower-level noise");
        ci = mean_ci_bootstrap(h, config);
        report["seed"] = args.seed;
    } else if (args.method == "asymptotic" || args.method == "asymptotic-t" ||
               args.method == "asymptotic-normal") {
        const TailDistribution dist = args.method == "asymptotic-normal"
                                          ? TailDistribution::normal
                                          : TailDistribution::student_t;
        try {
            ci = mean_ci_asymptotic(h, args.alpha, dist);
        } catch (const UndefinedVarianceError&) {
            throw Error(
                "input has a single top-level repetition: the parametric mean interval is "
                "undefined, and a bootstrap cannot reflect top-level variation from one group "
                "either; collect at least 2 top-level repetitions");
        }
    } else {
        throw DomainError("unknown summary method '" + args.method +
                          "' (asymptotic|asymptotic-normal|bootstrap)");
    }
    if (ci.lower == ci.upper)
        report["warnings"].push_back("zero variance: the interval is a single point");
    report["interval"] = to_json(ci);
    report["config"] = {
        {"alpha", args.alpha},          {"method", args.method},
        {"drop_warmup", args.warmup},   {"iterations", args.iterations},
        {"strategy", args.strategy},    {"seed", args.seed},
    };
    emit(report);
    return kExitOk;
}

struct CompareArgs {
    std::string old_path, new_path, input_format;
    std::string method = "fieller";
    double alpha = 0.05;
    double threshold = 0.0;
    double warmup = 0.0;
    std::size_t iterations = 1000;
    std::string strategy = "rrr";
    std::uint64_t seed = 0;
};

int run_compare(const CompareArgs& args) {
    const Hierarchy old_system = load_input(args.old_path, args.input_format, args.warmup);
    const Hierarchy new_system = load_input(args.new_path, args.input_format, args.warmup);

    json report = base_report("compare");
    report["input_shape"] = shape_json(old_system.shape());
    report["grand_mean"] = {{"old", grand_mean(old_system)}, {"new", grand_mean(new_system)}};
    report["variance_decomposition"] = {
        {"old", decomposition_or_null(old_system, report["warnings"])},
        {"new", decomposition_or_null(new_system, report["warnings"])},
    };

    ConfidenceInterval ci;
    bool used_seed = false;
    if (args.method == "bootstrap") {
        BootstrapConfig config;
        config.iterations = args.iterations;
        config.alpha = args.alpha;
        config.strategy = ResamplingStrategy::parse(args.strategy);
        config.seed = args.seed;
        ci = ratio_ci_bootstrap(old_system, new_system, config);
        used_seed = true;
    } else if (args.method == "fieller" || args.method == "fieller-normal") {
        const TailDistribution dist = args.method == "fieller-normal"
                                          ? TailDistribution::normal
                                          : TailDistribution::student_t;
        ci = ratio_ci_fieller(old_system, new_system, args.alpha, dist);
    } else {
        throw DomainError("unknown comparison method '" + args.method +
                          "' (fieller|fieller-normal|bootstrap)");
    }

    const ChangeDecision decision = threshold_decision(ci, args.threshold);
    report["interval"] = to_json(ci);
    report["decision"] = {{"detected", decision.detected}, {"threshold", decision.threshold}};
    if (used_seed) report["seed"] = args.seed;
    report["config"] = {
        {"alpha", args.alpha},        {"method", args.method},
        {"threshold", args.threshold}, {"drop_warmup", args.warmup},
        {"iterations", args.iterations}, {"strategy", args.strategy},
        {"seed", args.seed},
    };
    emit(report);
    return decision.detected ? kExitChangeDetected : kExitOk;
}

struct PlanArgs {
    std::string input, input_format;
    std::vector<double> costs;
    std::optional<double> budget;
    bool assume_t_equals_s = false;
    double alpha = 0.05;
    double warmup = 0.0;
};

int run_plan(const PlanArgs& args) {
    const Hierarchy pilot = load_input(args.input, args.input_format, args.warmup);

    json report = base_report("plan");
    report["input_shape"] = shape_json(pilot.shape());
    report["grand_mean"] = grand_mean(pilot);

    CostModel cost_model;
    cost_model.costs = args.costs;
    cost_model.budget = args.budget;
    if (cost_model.costs.size() > pilot.ways())
        throw ValidationError("got " + std::to_string(cost_model.costs.size()) +
                              " costs for a pilot with " + std::to_string(pilot.ways()) +
                              " plannable levels");
    while (cost_model.costs.size() < pilot.ways()) {
        report["warnings"].push_back("no cost given for the level-" +
                                     std::to_string(cost_model.costs.size() + 2) +
                                     " setup; assuming 0");
        cost_model.costs.push_back(0.0);
    }

    PlanOptions options;
    options.assume_t_equals_s = args.assume_t_equals_s;
    options.alpha = args.alpha;
    const ExperimentPlan plan = plan_experiment(pilot, cost_model, options);

    json counts = json(plan.counts);
    if (plan.top_count) counts.push_back(*plan.top_count);
    report["plan"] = {
        {"counts", counts},
        {"dropped_levels", plan.dropped_levels},
        {"predicted_halfwidth",
         plan.predicted_halfwidth ? json(*plan.predicted_halfwidth) : json(nullptr)},
    };
    report["variance_decomposition"] = to_json(plan.decomposition);
    for (const auto& w : plan.warnings) report["warnings"].push_back(w);
    report["config"] = {
        {"alpha", args.alpha},
        {"costs", args.costs},
        {"budget", args.budget ? json(*args.budget) : json(nullptr)},
        {"assume_t_equals_s", args.assume_t_equals_s},
        {"drop_warmup", args.warmup},
    };
    emit(report);
    return kExitOk;
}

struct SimulateArgs {
    // false-alarm inputs
    std::string input, input_format;
    std::vector<std::size_t> binaries;
    std::vector<double> thresholds{0.0};
    // coverage inputs
    double mu = 1.0;
    std::vector<double> sigmas;
    double theta = 0.95;
    std::vector<std::size_t> shape;
    // shared
    std::string method = "fieller";
    std::size_t iterations = 1000;
    double alpha = 0.05;
    std::uint64_t seed = 0;
    std::size_t bootstrap_iterations = 1000;
    std::string strategy = "rrr";
    double warmup = 0.0;
    std::string output_format = "json";
};

SimulationOptions cell_options(const SimulateArgs& args, std::size_t cell) {
    SimulationOptions options;
    options.iterations = args.iterations;
    options.alpha = args.alpha;
    options.seed = derive_cell_seed(args.seed, cell);
    options.bootstrap_iterations = args.bootstrap_iterations;
    options.strategy = ResamplingStrategy::parse(args.strategy);
    return options;
}

int emit_simulation(const SimulateArgs& args, const std::string& command,
                    const SimulationReport& combined, json&& extra_config, json&& input_shape,
                    json&& grand_mean_value, json&& decomposition) {
    if (args.output_format == "csv") {
        std::cout << to_csv(combined);
        return kExitOk;
    }
    json report = base_report(command);
    report["input_shape"] = std::move(input_shape);
    report["grand_mean"] = std::move(grand_mean_value);
    report["variance_decomposition"] = std::move(decomposition);
    report["simulation"] = to_json(combined);
    report["seed"] = args.seed;
    report["config"] = std::move(extra_config);
    report["config"]["method"] = args.method;
    report["config"]["iterations"] = args.iterations;
    report["config"]["alpha"] = args.alpha;
    report["config"]["seed"] = args.seed;
    report["config"]["bootstrap_iterations"] = args.bootstrap_iterations;
    report["config"]["strategy"] = args.strategy;
    emit(report);
    return kExitOk;
}

int run_false_alarm(const SimulateArgs& args) {
    const Hierarchy source = load_input(args.input, args.input_format, args.warmup);
    const RatioMethod method = parse_ratio_method(args.method);
    if (args.binaries.empty()) throw DomainError("--binaries list is required for false-alarm");

    SimulationReport combined;
    combined.kind = SimulationReport::Kind::false_alarm;
    combined.seed = args.seed;
    for (std::size_t cell = 0; cell < args.binaries.size(); ++cell) {
        const SimulationReport part = false_alarm_rate(source, method, args.binaries[cell],
                                                       args.thresholds, cell_options(args, cell));
        combined.cells.insert(combined.cells.end(), part.cells.begin(), part.cells.end());
    }

    json warnings = json::array();
    json decomposition = decomposition_or_null(source, warnings);
    return emit_simulation(args, "simulate-false-alarm", combined,
                           json{{"binaries", args.binaries},
                                {"thresholds", args.thresholds},
                                {"drop_warmup", args.warmup}},
                           shape_json(source.shape()), json(grand_mean(source)),
                           std::move(decomposition));
}

int run_coverage(const SimulateArgs& args) {
    const RatioMethod method = parse_ratio_method(args.method);
    if (args.shape.empty()) throw DomainError("--shape is required for coverage");
    if (args.sigmas.empty()) throw DomainError("--sigmas is required for coverage");

    HierarchicalNormalModel model;
    model.mu = args.mu;
    model.sigmas = args.sigmas;

    std::vector<std::vector<std::size_t>> shapes;
    if (args.binaries.empty()) {
        shapes.push_back(args.shape);
    } else {
        for (std::size_t b : args.binaries) {
            auto s = args.shape;
            s[0] = b;
            shapes.push_back(std::move(s));
        }
    }

    SimulationReport combined;
    combined.kind = SimulationReport::Kind::coverage;
    combined.seed = args.seed;
    for (std::size_t cell = 0; cell < shapes.size(); ++cell) {
        const SimulationReport part =
            coverage(model, args.theta, method, shapes[cell], cell_options(args, cell));
        combined.cells.insert(combined.cells.end(), part.cells.begin(), part.cells.end());
    }

    return emit_simulation(args, "simulate-coverage", combined,
                           json{{"mu", args.mu},
                                {"sigmas", args.sigmas},
                                {"theta", args.theta},
                                {"shape", args.shape},
                                {"binaries", args.binaries}},
                           shape_json(args.shape), json(nullptr), json(nullptr));
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Quantifies performance and performance change from hierarchically repeated "
                 "benchmark measurements"};
    app.require_subcommand(1);

    SummarizeArgs summarize_args;
    auto* summarize = app.add_subcommand(
        "summarize", "Mean and confidence interval for one system");
    summarize->add_option("--input", summarize_args.input, "Dataset file (.csv or .json)")
        ->required();
    summarize->add_option("--input-format", summarize_args.input_format, "csv|json");
    summarize->add_option("--alpha", summarize_args.alpha, "1 - confidence level");
    summarize->add_option("--method", summarize_args.method,
                          "asymptotic|asymptotic-normal|bootstrap");
    summarize->add_option("--drop-warmup", summarize_args.warmup,
                          "Fraction of leading measurements dropped per execution");
    summarize->add_option("--iterations", summarize_args.iterations, "Bootstrap iterations");
    summarize->add_option("--strategy", summarize_args.strategy, "rrr|rrn|rnn|flat");
    summarize->add_option("--seed", summarize_args.seed, "Bootstrap seed");

    CompareArgs compare_args;
    auto* compare = app.add_subcommand(
        "compare", "Ratio-of-means interval and threshold decision for two systems");
    compare->add_option("--old", compare_args.old_path, "Old-system dataset")->required();
    compare->add_option("--new", compare_args.new_path, "New-system dataset")->required();
    compare->add_option("--input-format", compare_args.input_format, "csv|json");
    compare->add_option("--alpha", compare_args.alpha, "1 - confidence level");
    compare->add_option("--method", compare_args.method, "fieller|fieller-normal|bootstrap");
    compare->add_option("--threshold", compare_args.threshold,
                        "Relative change of practical interest");
    compare->add_option("--drop-warmup", compare_args.warmup,
                        "Fraction of leading measurements dropped per execution");
    compare->add_option("--iterations", compare_args.iterations, "Bootstrap iterations");
    compare->add_option("--strategy", compare_args.strategy, "rrr|rrn|rnn|flat");
    compare->add_option("--seed", compare_args.seed, "Bootstrap seed");

    PlanArgs plan_args;
    double budget_value = 0.0;
    auto* plan = app.add_subcommand("plan", "Optimal repetition counts from a pilot experiment");
    plan->add_option("--input", plan_args.input, "Pilot dataset")->required();
    plan->add_option("--input-format", plan_args.input_format, "csv|json");
    plan->add_option("--costs", plan_args.costs, "Setup costs c_1,c_2,... lowest level first")
        ->delimiter(',')
        ->required();
    auto* budget_opt =
        plan->add_option("--budget", budget_value, "Total cost cap in measurement units");
    plan->add_flag("--assume-t-equals-s", plan_args.assume_t_equals_s,
                   "Plan from the biased S^2 estimates");
    plan->add_option("--alpha", plan_args.alpha, "Confidence for the predicted half-width");
    plan->add_option("--drop-warmup", plan_args.warmup,
                     "Fraction of leading measurements dropped per execution");

    SimulateArgs sim_args;
    auto* simulate = app.add_subcommand("simulate", "Monte-Carlo evaluation of the methods");
    simulate->require_subcommand(1);
    auto* false_alarm = simulate->add_subcommand(
        "false-alarm", "Same-system comparisons over a threshold/binaries grid");
    false_alarm->add_option("--input", sim_args.input, "Source dataset")->required();
    false_alarm->add_option("--input-format", sim_args.input_format, "csv|json");
    false_alarm->add_option("--binaries", sim_args.binaries, "Top-level sample sizes")
        ->delimiter(',')
        ->required();
    false_alarm->add_option("--thresholds", sim_args.thresholds, "Decision thresholds")
        ->delimiter(',');
    false_alarm->add_option("--drop-warmup", sim_args.warmup,
                            "Fraction of leading measurements dropped per execution");

    auto* coverage_cmd = simulate->add_subcommand(
        "coverage", "Interval coverage under a hierarchical normal model");
    coverage_cmd->add_option("--mu", sim_args.mu, "Old-system mean");
    coverage_cmd->add_option("--sigmas", sim_args.sigmas,
                             "Per-level standard deviations, lowest level first")
        ->delimiter(',')
        ->required();
    coverage_cmd->add_option("--theta", sim_args.theta, "True ratio new/old");
    coverage_cmd->add_option("--shape", sim_args.shape, "Repetition counts, highest level first")
        ->delimiter(',')
        ->required();
    coverage_cmd->add_option("--binaries", sim_args.binaries,
                             "Optional list of top-level counts overriding the shape")
        ->delimiter(',');

    for (auto* cmd : {false_alarm, coverage_cmd}) {
        cmd->add_option("--method", sim_args.method, "fieller|fieller-normal|bootstrap");
        cmd->add_option("--iterations", sim_args.iterations, "Simulated comparisons per cell");
        cmd->add_option("--alpha", sim_args.alpha, "1 - confidence level");
        cmd->add_option("--seed", sim_args.seed, "Simulation seed");
        cmd->add_option("--bootstrap-iterations", sim_args.bootstrap_iterations,
                        "Iterations of the nested bootstrap");
        cmd->add_option("--strategy", sim_args.strategy, "rrr|rrn|rnn|flat");
        cmd->add_option("--format", sim_args.output_format, "json|csv");
    }

    CLI11_PARSE(app, argc, argv);

    try {
        if (app.got_subcommand(summarize)) return run_summarize(summarize_args);
        if (app.got_subcommand(compare)) return run_compare(compare_args);
        if (app.got_subcommand(plan)) {
            if (budget_opt->count() > 0) plan_args.budget = budget_value;
            return run_plan(plan_args);
        }
        if (app.got_subcommand(simulate)) {
            if (sim_args.output_format != "json" && sim_args.output_format != "csv")
                throw DomainError("unknown output format '" + sim_args.output_format +
                                  "' (json|csv)");
            if (simulate->got_subcommand(false_alarm)) return run_false_alarm(sim_args);
            return run_coverage(sim_args);
        }
    } catch (const perfquant::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitError;
    }
    return kExitError;
}
