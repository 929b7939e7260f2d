#pragma once

// Tabular results: a CSV primary file plus a JSON mirror with provenance.

#include <string>
#include <variant>
#include <vector>

#include "json.hpp"

namespace qlat {

inline constexpr int kSchemaVersion = 1;

struct Column {
    std::string name;
    std::string unit;  // "" for dimensionless
};

using Cell = std::variant<std::string, long long, double>;

class ResultTable {
public:
    ResultTable() = default;
    ResultTable(std::string experiment, std::vector<Column> columns);

    const std::string& experiment() const { return experiment_; }
    const std::vector<Column>& columns() const { return columns_; }
    const std::vector<std::vector<Cell>>& rows() const { return rows_; }

    void add_row(std::vector<Cell> row);

    // Deterministic per-run summary values (part of the JSON mirror only).
    nlohmann::json& summary() { return summary_; }
    const nlohmann::json& summary() const { return summary_; }

    std::string config_hash;
    std::string code_version;
    double wall_seconds = 0.0;

    std::string to_csv() const;
    nlohmann::json to_json() const;

private:
    std::string experiment_;
    std::vector<Column> columns_;
    std::vector<std::vector<Cell>> rows_;
    nlohmann::json summary_ = nlohmann::json::object();
};

std::string format_double(double v);

// Writes `content` to a temp file next to `path` and renames it into place.
void write_atomic(const std::string& path, const std::string& content);

// Writes <stem>.csv and <stem>.json.
void write_table(const ResultTable& t, const std::string& stem);

const char* code_version();

}  // namespace qlat
