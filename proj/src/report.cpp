#include "perfquant/report.hpp"

#include <cstdio>
#include <sstream>

namespace perfquant {

namespace {

std::string format_full(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string shape_compact(const std::vector<std::size_t>& shape) {
    std::ostringstream out;
    for (std::size_t i = 0; i < shape.size(); ++i) {
        if (i > 0) out << 'x';
        out << shape[i];
    }
    return out.str();
}

}  // namespace

nlohmann::json to_json(const ConfidenceInterval& ci) {
    return {
        {"lower", ci.lower},
        {"upper", ci.upper},
        {"confidence", ci.confidence},
        {"method", to_string(ci.method)},
        {"point_estimate", ci.point_estimate},
    };
}

nlohmann::json to_json(const VarianceDecomposition& decomposition) {
    return {
        {"s_squared", decomposition.s_squared},
        {"t_squared", decomposition.t_squared},
        {"nonpositive_levels", decomposition.nonpositive_levels},
    };
}

nlohmann::json to_json(const SimulationReport& report) {
    const char* parameter_key =
        report.kind == SimulationReport::Kind::false_alarm ? "threshold" : "theta";
    nlohmann::json cells = nlohmann::json::array();
    for (const auto& cell : report.cells) {
        cells.push_back({
            {"shape", cell.shape},
            {parameter_key, cell.parameter},
            {"method", to_string(cell.method)},
            {"iterations", cell.iterations},
            {"excluded", cell.excluded},
            {"estimate", cell.estimate},
            {"std_error", cell.std_error},
        });
    }
    return cells;
}

std::string to_csv(const SimulationReport& report) {
    std::ostringstream out;
    out << "kind,shape,parameter,method,iterations,excluded,estimate,std_error,seed\n";
    const char* kind =
        report.kind == SimulationReport::Kind::false_alarm ? "false-alarm" : "coverage";
    for (const auto& cell : report.cells) {
        out << kind << ',' << shape_compact(cell.shape) << ',' << format_full(cell.parameter)
            << ',' << to_string(cell.method) << ',' << cell.iterations << ',' << cell.excluded
            << ',' << format_full(cell.estimate) << ',' << format_full(cell.std_error) << ','
            << report.seed << '\n';
    }
    return out.str();
}

nlohmann::json shape_json(const std::vector<std::size_t>& shape) {
    return nlohmann::json(shape);
}

}  // namespace perfquant
