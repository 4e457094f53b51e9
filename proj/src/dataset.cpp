#include "perfquant/dataset.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "perfquant/errors.hpp"

namespace perfquant {

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    std::istringstream in(line);
    while (std::getline(in, field, ',')) fields.push_back(field);
    if (!line.empty() && line.back() == ',') fields.emplace_back();
    return fields;
}

std::string trimmed(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t");
    if (begin == std::string::npos) return "";
    const auto end = s.find_last_not_of(" \t");
    return s.substr(begin, end - begin + 1);
}

double parse_double(const std::string& raw, const std::string& name, std::size_t line_no) {
    const std::string text = trimmed(raw);
    double value = 0.0;
    const auto result = std::from_chars(text.data(), text.data() + text.size(), value);
    if (result.ec != std::errc{} || result.ptr != text.data() + text.size())
        throw ValidationError(name + ", line " + std::to_string(line_no) + ": '" + text +
                              "' is not a number");
    if (!std::isfinite(value))
        throw ValidationError(name + ", line " + std::to_string(line_no) +
                              ": non-finite value '" + text + "'");
    return value;
}

std::size_t parse_index(const std::string& raw, const std::string& column,
                        const std::string& name, std::size_t line_no) {
    const std::string text = trimmed(raw);
    std::size_t value = 0;
    const auto result = std::from_chars(text.data(), text.data() + text.size(), value);
    if (result.ec != std::errc{} || result.ptr != text.data() + text.size())
        throw ValidationError(name + ", line " + std::to_string(line_no) + ": " + column +
                              " index '" + text + "' is not an integer");
    if (value == 0)
        throw ValidationError(name + ", line " + std::to_string(line_no) + ": " + column +
                              " indices are 1-based; got 0");
    return value;
}

}  // namespace

DatasetFormat detect_format(const std::string& path) {
    const auto dot = path.find_last_of('.');
    if (dot != std::string::npos) {
        std::string ext = path.substr(dot + 1);
        std::transform(ext.begin(), ext.end(), ext.begin(),
                       [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
        if (ext == "csv") return DatasetFormat::csv;
        if (ext == "json") return DatasetFormat::json;
    }
    throw ValidationError("cannot infer dataset format from '" + path +
                          "'; use a .csv/.json extension or pass the format explicitly");
}

Hierarchy load_dataset(const std::string& path, std::optional<DatasetFormat> format) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open dataset file '" + path + "'");
    const DatasetFormat f = format ? *format : detect_format(path);
    return f == DatasetFormat::csv ? parse_csv_dataset(in, path) : parse_json_dataset(in, path);
}

Hierarchy parse_csv_dataset(std::istream& in, const std::string& name) {
    std::string line;
    if (!std::getline(in, line))
        throw ValidationError(name + ": empty file, expected a header row");
    if (!line.empty() && line.back() == '\r') line.pop_back();

    const auto header = split_csv_line(line);
    if (header.empty() || trimmed(header.back()) != "value")
        throw ValidationError(name + ", line 1: header must end in a 'value' column");
    const std::size_t levels = header.size();  // level columns + value
    for (std::size_t c = 0; c + 1 < header.size(); ++c) {
        const std::string expected = "level_" + std::to_string(levels - c);
        if (trimmed(header[c]) != expected)
            throw ValidationError(name + ", line 1: expected column '" + expected + "', got '" +
                                  trimmed(header[c]) + "'");
    }

    std::map<std::vector<std::size_t>, std::vector<double>> groups;
    std::vector<std::size_t> level_maxima(levels - 1, 0);
    std::size_t line_no = 1;
    std::size_t rows = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (trimmed(line).empty()) continue;
        const auto fields = split_csv_line(line);
        if (fields.size() != levels)
            throw ValidationError(name + ", line " + std::to_string(line_no) + ": expected " +
                                  std::to_string(levels) + " columns, found " +
                                  std::to_string(fields.size()));
        std::vector<std::size_t> key(levels - 1);
        for (std::size_t c = 0; c + 1 < fields.size(); ++c) {
            key[c] = parse_index(fields[c], trimmed(header[c]), name, line_no);
            level_maxima[c] = std::max(level_maxima[c], key[c]);
        }
        groups[key].push_back(parse_double(fields.back(), name, line_no));
        ++rows;
    }
    if (rows == 0) throw ValidationError(name + ": no data rows");

    std::size_t expected_groups = 1;
    for (std::size_t m : level_maxima) expected_groups *= m;
    if (groups.size() != expected_groups)
        throw ValidationError(name + ": ragged or mis-sized input: the level indices imply " +
                              std::to_string(expected_groups) + " groups, found " +
                              std::to_string(groups.size()));

    const std::size_t per_group = groups.begin()->second.size();
    for (const auto& [key, measurements] : groups) {
        if (measurements.size() != per_group) {
            std::ostringstream msg;
            msg << name << ": ragged or mis-sized input: group (";
            for (std::size_t c = 0; c < key.size(); ++c) {
                if (c > 0) msg << ",";
                msg << key[c];
            }
            msg << ") has " << measurements.size() << " measurements, expected " << per_group;
            throw ValidationError(msg.str());
        }
    }

    std::vector<std::size_t> shape = level_maxima;
    shape.push_back(per_group);
    std::vector<double> values;
    values.reserve(rows);
    for (const auto& [key, measurements] : groups)
        values.insert(values.end(), measurements.begin(), measurements.end());
    return Hierarchy::build(std::move(shape), std::move(values));
}

Hierarchy parse_json_dataset(std::istream& in, const std::string& name) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw ValidationError(name + ": " + e.what());
    }
    if (!doc.is_array()) throw ValidationError(name + ": top-level JSON value must be an array");

    std::vector<std::size_t> shape;
    const nlohmann::json* probe = &doc;
    while (probe->is_array()) {
        if (probe->empty())
            throw ValidationError(name + ": ragged or mis-sized input: empty array at depth " +
                                  std::to_string(shape.size() + 1));
        shape.push_back(probe->size());
        probe = &(*probe)[0];
    }

    std::vector<double> values;
    auto flatten = [&](auto&& self, const nlohmann::json& node, std::size_t depth) -> void {
        if (depth == shape.size()) {
            if (!node.is_number())
                throw ValidationError(name + ": ragged or mis-sized input: leaf at depth " +
                                      std::to_string(depth) + " is not a number");
            const double v = node.get<double>();
            if (!std::isfinite(v))
                throw ValidationError(name + ": non-finite value at flat index " +
                                      std::to_string(values.size()));
            values.push_back(v);
            return;
        }
        if (!node.is_array() || node.size() != shape[depth])
            throw ValidationError(name + ": ragged or mis-sized input: depth " +
                                  std::to_string(depth + 1) + " expects " +
                                  std::to_string(shape[depth]) + " entries, found " +
                                  (node.is_array() ? std::to_string(node.size())
                                                   : std::string("a non-array")));
        for (const auto& child : node) self(self, child, depth + 1);
    };
    flatten(flatten, doc, 0);
    return Hierarchy::build(std::move(shape), std::move(values));
}

Hierarchy drop_warmup(const Hierarchy& h, double fraction) {
    if (!(fraction >= 0.0 && fraction < 1.0))
        throw DomainError("warm-up fraction must lie in [0, 1)");
    const std::size_t n1 = h.count_at(1);
    const double raw = fraction * static_cast<double>(n1);
    // The product may land a hair under an exact integer; snap it back.
    const double rounded = std::nearbyint(raw);
    const auto dropped = std::abs(raw - rounded) < 1e-9 ? static_cast<std::size_t>(rounded)
                                                        : static_cast<std::size_t>(std::floor(raw));
    if (dropped == 0) return h;

    const std::size_t kept = n1 - dropped;
    std::vector<std::size_t> shape = h.shape();
    shape.back() = kept;
    const auto values = h.values();
    std::vector<double> trimmed_values;
    trimmed_values.reserve(h.total() / n1 * kept);
    for (std::size_t g = 0; g < h.total() / n1; ++g)
        for (std::size_t k = dropped; k < n1; ++k) trimmed_values.push_back(values[g * n1 + k]);
    return Hierarchy::build(std::move(shape), std::move(trimmed_values), h.level_names());
}

}  // namespace perfquant
