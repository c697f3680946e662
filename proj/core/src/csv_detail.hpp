#pragma once

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "epr/errors.hpp"

namespace epr::detail {

// Lines with 1-based numbering; trailing '\r' stripped (CRLF tolerated).
struct NumberedLine {
    std::size_t number;
    std::string text;
};

inline std::vector<NumberedLine> read_lines(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw DataError("cannot open file: " + path.string());
    }
    std::vector<NumberedLine> lines;
    std::string line;
    std::size_t number = 0;
    while (std::getline(in, line)) {
        ++number;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        lines.push_back({number, line});
    }
    return lines;
}

inline std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    std::istringstream ss(line);
    while (std::getline(ss, field, ',')) {
        // trim surrounding spaces
        const auto first = field.find_first_not_of(" \t");
        const auto last = field.find_last_not_of(" \t");
        fields.push_back(first == std::string::npos
                             ? std::string{}
                             : field.substr(first, last - first + 1));
    }
    if (!line.empty() && line.back() == ',') fields.emplace_back();
    return fields;
}

inline bool parse_double(const std::string& text, double& out) {
    if (text.empty()) return false;
    std::size_t pos = 0;
    try {
        out = std::stod(text, &pos);
    } catch (const std::exception&) {
        return false;
    }
    return pos == text.size();
}

inline bool parse_count(const std::string& text, long long& out) {
    if (text.empty()) return false;
    std::size_t pos = 0;
    try {
        out = std::stoll(text, &pos);
    } catch (const std::exception&) {
        return false;
    }
    return pos == text.size();
}

}  // namespace epr::detail
