#include "eprcli/report.hpp"

#include <algorithm>
#include <cstdio>

#ifndef EPRSIM_VERSION
#define EPRSIM_VERSION "0.0.0"
#endif

namespace eprcli {

std::string format_double(double value) {
    char buffer[64];
    std::snprintf(buffer, sizeof(buffer), "%.10g", value);
    return buffer;
}

RunReport::RunReport(std::string command) : command_(std::move(command)) {}

void RunReport::param(const std::string& name, const std::string& value) {
    parameters_[name] = value;
}

void RunReport::param(const std::string& name, double value) {
    parameters_[name] = value;
}

void RunReport::param(const std::string& name, std::int64_t value) {
    parameters_[name] = value;
}

void RunReport::result(const std::string& name, double value) {
    results_[name] = value;
    text_results_.emplace_back(name, format_double(value));
}

void RunReport::result(const std::string& name, const epr::Uncertain& value) {
    results_[name] = {{"value", value.value}, {"sigma", value.sigma}};
    text_results_.emplace_back(
        name, format_double(value.value) + " +- " + format_double(value.sigma));
}

void RunReport::result(const std::string& name, const std::string& value) {
    results_[name] = value;
    text_results_.emplace_back(name, value);
}

void RunReport::verdict(const std::string& text) { verdict_ = text; }

void RunReport::note(const std::string& text) { notes_.push_back(text); }

void RunReport::seed(std::uint64_t value) { seed_ = value; }

void RunReport::table(std::vector<std::string> header,
                      std::vector<std::vector<std::string>> rows) {
    table_header_ = std::move(header);
    table_rows_ = std::move(rows);
}

nlohmann::ordered_json RunReport::to_json() const {
    nlohmann::ordered_json j;
    j["command"] = command_;
    j["version"] = EPRSIM_VERSION;
    if (seed_) j["seed"] = *seed_;
    j["parameters"] = parameters_;
    j["results"] = results_;
    if (verdict_) j["verdict"] = *verdict_;
    if (!table_header_.empty()) {
        nlohmann::ordered_json table;
        table["columns"] = table_header_;
        table["rows"] = table_rows_;
        j["table"] = table;
    }
    if (!notes_.empty()) j["notes"] = notes_;
    return j;
}

void RunReport::print_text(std::ostream& out) const {
    out << "eprsim " << command_ << " (v" << EPRSIM_VERSION << ")\n";
    if (!parameters_.empty()) {
        out << "parameters:\n";
        for (const auto& [key, value] : parameters_.items()) {
            out << "  " << key << ": ";
            if (value.is_string()) {
                out << value.get<std::string>();
            } else {
                out << value.dump();
            }
            out << "\n";
        }
    }
    if (seed_) out << "seed: " << *seed_ << "\n";
    if (!text_results_.empty()) {
        out << "results:\n";
        for (const auto& [name, value] : text_results_) {
            out << "  " << name << ": " << value << "\n";
        }
    }
    if (!table_header_.empty()) {
        std::vector<std::size_t> widths(table_header_.size());
        for (std::size_t c = 0; c < table_header_.size(); ++c) {
            widths[c] = table_header_[c].size();
        }
        for (const auto& row : table_rows_) {
            for (std::size_t c = 0; c < row.size() && c < widths.size(); ++c) {
                widths[c] = std::max(widths[c], row[c].size());
            }
        }
        const auto print_row = [&](const std::vector<std::string>& row) {
            out << " ";
            for (std::size_t c = 0; c < row.size(); ++c) {
                out << " ";
                out << row[c];
                for (std::size_t pad = row[c].size(); pad < widths[c]; ++pad) out << ' ';
            }
            out << "\n";
        };
        print_row(table_header_);
        for (const auto& row : table_rows_) print_row(row);
    }
    if (verdict_) out << "verdict: " << *verdict_ << "\n";
    for (const auto& note : notes_) out << "note: " << note << "\n";
}

}  // namespace eprcli
