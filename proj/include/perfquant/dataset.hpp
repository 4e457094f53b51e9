#pragma once

#include <iosfwd>
#include <optional>
#include <string>

#include "perfquant/hierarchy.hpp"

namespace perfquant {

enum class DatasetFormat { csv, json };

// Infers the format from the file extension (.csv / .json).
DatasetFormat detect_format(const std::string& path);

// Reads a dataset file into a validated hierarchy. Both formats normalize
// to the same row-major layout, so downstream analysis cannot tell them
// apart.
Hierarchy load_dataset(const std::string& path,
                       std::optional<DatasetFormat> format = std::nullopt);

// CSV: header `level_<n+1>,...,level_2,value` (just `value` for flat data),
// one row per measurement, 1-based group indices, measurement order within
// a group is file order. The design must be balanced.
Hierarchy parse_csv_dataset(std::istream& in, const std::string& name);

// JSON: nested arrays of depth n+1 with uniform lengths per depth; leaves
// are numbers.
Hierarchy parse_json_dataset(std::istream& in, const std::string& name);

// Removes the leading floor(fraction * n_1) measurements of every
// lowest-level group; fraction in [0, 1).
Hierarchy drop_warmup(const Hierarchy& h, double fraction);

}  // namespace perfquant
