#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "epr/uncertain.hpp"

namespace eprcli {

/// Structured outcome of one CLI command: parameter echo, named results with
/// uncertainties where defined, optional tables and notes, and provenance
/// (seed, version). Renders as aligned text or JSON; both renderings are
/// deterministic for fixed inputs.
class RunReport {
public:
    explicit RunReport(std::string command);

    void param(const std::string& name, const std::string& value);
    void param(const std::string& name, double value);
    void param(const std::string& name, std::int64_t value);

    void result(const std::string& name, double value);
    void result(const std::string& name, const epr::Uncertain& value);
    void result(const std::string& name, const std::string& value);

    void verdict(const std::string& text);
    void note(const std::string& text);
    void seed(std::uint64_t value);

    void table(std::vector<std::string> header,
               std::vector<std::vector<std::string>> rows);

    nlohmann::ordered_json to_json() const;
    void print_text(std::ostream& out) const;

private:
    std::string command_;
    nlohmann::ordered_json parameters_ = nlohmann::ordered_json::object();
    nlohmann::ordered_json results_ = nlohmann::ordered_json::object();
    std::vector<std::pair<std::string, std::string>> text_results_;
    std::optional<std::string> verdict_;
    std::vector<std::string> notes_;
    std::optional<std::uint64_t> seed_;
    std::vector<std::string> table_header_;
    std::vector<std::vector<std::string>> table_rows_;
};

/// Shortest round-trippable decimal rendering used across reports and CSVs.
std::string format_double(double value);

}  // namespace eprcli
