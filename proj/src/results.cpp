#include "qlat/results.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <thread>

#include "qlat/common.hpp"

#ifndef QLAT_VERSION
#define QLAT_VERSION "0.0.0"
#endif

namespace qlat {

namespace fs = std::filesystem;

const char* code_version() { return QLAT_VERSION; }

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

ResultTable::ResultTable(std::string experiment, std::vector<Column> columns)
    : experiment_(std::move(experiment)), columns_(std::move(columns)) {}

void ResultTable::add_row(std::vector<Cell> row) {
    require(row.size() == columns_.size(), "ResultTable: row has " + std::to_string(row.size()) + " cells, expected " +
                                               std::to_string(columns_.size()));
    rows_.push_back(std::move(row));
}

namespace {

std::string csv_escape(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

std::string cell_text(const Cell& c) {
    if (const auto* s = std::get_if<std::string>(&c)) return csv_escape(*s);
    if (const auto* i = std::get_if<long long>(&c)) return std::to_string(*i);
    return format_double(std::get<double>(c));
}

}  // namespace

std::string ResultTable::to_csv() const {
    std::ostringstream os;
    os << "# schema_version: " << kSchemaVersion << "; experiment: " << experiment_ << "; config_hash: " << config_hash
       << "; code_version: " << code_version << "\n";
    os << "# units:";
    for (std::size_t i = 0; i < columns_.size(); ++i)
        os << (i ? "," : " ") << (columns_[i].unit.empty() ? "1" : columns_[i].unit);
    os << "\n";
    for (std::size_t i = 0; i < columns_.size(); ++i) os << (i ? "," : "") << columns_[i].name;
    os << "\n";
    for (const auto& r : rows_) {
        for (std::size_t i = 0; i < r.size(); ++i) os << (i ? "," : "") << cell_text(r[i]);
        os << "\n";
    }
    return os.str();
}

nlohmann::json ResultTable::to_json() const {
    using nlohmann::json;
    json cols = json::array();
    for (const auto& c : columns_) cols.push_back({{"name", c.name}, {"unit", c.unit}});
    json rows = json::array();
    for (const auto& r : rows_) {
        json row = json::array();
        for (const auto& c : r) std::visit([&](const auto& v) { row.push_back(v); }, c);
        rows.push_back(std::move(row));
    }
    return {{"schema_version", kSchemaVersion},
            {"experiment", experiment_},
            {"columns", cols},
            {"rows", rows},
            {"summary", summary_},
            {"provenance", {{"config_hash", config_hash}, {"code_version", code_version}, {"wall_seconds", wall_seconds}}}};
}

void write_atomic(const std::string& path, const std::string& content) {
    const fs::path target(path);
    if (target.has_parent_path()) fs::create_directories(target.parent_path());
    std::ostringstream tmpname;
    tmpname << path << ".tmp." << std::hash<std::thread::id>{}(std::this_thread::get_id());
    {
        std::ofstream out(tmpname.str(), std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot write '" + tmpname.str() + "'");
        out << content;
        if (!out) throw std::runtime_error("write failed for '" + tmpname.str() + "'");
    }
    fs::rename(tmpname.str(), target);
}

void write_table(const ResultTable& t, const std::string& stem) {
    write_atomic(stem + ".csv", t.to_csv());
    write_atomic(stem + ".json", t.to_json().dump(2) + "\n");
}

}  // namespace qlat
