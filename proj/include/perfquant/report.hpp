#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "json.hpp"
#include "perfquant/estimators.hpp"
#include "perfquant/intervals.hpp"
#include "perfquant/simulation.hpp"

namespace perfquant {

nlohmann::json to_json(const ConfidenceInterval& ci);
nlohmann::json to_json(const VarianceDecomposition& decomposition);
nlohmann::json to_json(const SimulationReport& report);

// One row per grid cell:
// kind,shape,parameter,method,iterations,excluded,estimate,std_error,seed
std::string to_csv(const SimulationReport& report);

nlohmann::json shape_json(const std::vector<std::size_t>& shape);

}  // namespace perfquant
