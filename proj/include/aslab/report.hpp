#pragma once

// Tabular experiment reports. CSV is canonical; the JSON rendering mirrors
// it field for field. Every report carries provenance (machine digest,
// code version, parameters) and renders byte-identically for identical
// inputs: no timestamps, no locale, no float formatting drift.

#include <json.hpp>

#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "aslab/complexity.hpp"

namespace aslab {

struct Report {
    std::string title;
    std::vector<std::pair<std::string, std::string>> provenance;
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;

    void add_provenance(const std::string& key, const std::string& value) {
        provenance.emplace_back(key, value);
    }

    void add_row(std::vector<std::string> row) {
        if (row.size() != columns.size())
            throw InvariantViolation("report row width does not match columns");
        rows.push_back(std::move(row));
    }

    static std::string escape_csv(const std::string& value) {
        if (value.find_first_of(",\"\n") == std::string::npos) return value;
        std::string out = "\"";
        for (char ch : value) {
            if (ch == '"') out += "\"\"";
            else out += ch;
        }
        out += "\"";
        return out;
    }

    std::string to_csv() const {
        std::ostringstream os;
        os << "# report=" << title << "\n";
        for (const auto& [key, value] : provenance) os << "# " << key << "=" << value << "\n";
        for (std::size_t i = 0; i < columns.size(); ++i)
            os << (i ? "," : "") << escape_csv(columns[i]);
        os << "\n";
        for (const auto& row : rows) {
            for (std::size_t i = 0; i < row.size(); ++i)
                os << (i ? "," : "") << escape_csv(row[i]);
            os << "\n";
        }
        return os.str();
    }

    std::string to_json() const {
        nlohmann::ordered_json j;
        j["report"] = title;
        nlohmann::ordered_json prov = nlohmann::ordered_json::object();
        for (const auto& [key, value] : provenance) prov[key] = value;
        j["provenance"] = prov;
        j["columns"] = columns;
        nlohmann::ordered_json out_rows = nlohmann::ordered_json::array();
        for (const auto& row : rows) {
            nlohmann::ordered_json obj = nlohmann::ordered_json::object();
            for (std::size_t i = 0; i < row.size(); ++i) obj[columns[i]] = row[i];
            out_rows.push_back(obj);
        }
        j["rows"] = out_rows;
        return j.dump(2) + "\n";
    }
};

/// Parses a canonical CSV rendering back into a Report (for the format
/// conversion subcommand).
inline Report parse_csv_report(const std::string& text) {
    Report report;
    std::istringstream in(text);
    std::string line;
    bool have_columns = false;
    auto split = [](const std::string& s) {
        std::vector<std::string> fields;
        std::string current;
        bool quoted = false;
        for (std::size_t i = 0; i < s.size(); ++i) {
            char ch = s[i];
            if (quoted) {
                if (ch == '"' && i + 1 < s.size() && s[i + 1] == '"') {
                    current += '"';
                    ++i;
                } else if (ch == '"') {
                    quoted = false;
                } else {
                    current += ch;
                }
            } else if (ch == '"') {
                quoted = true;
            } else if (ch == ',') {
                fields.push_back(std::move(current));
                current.clear();
            } else {
                current += ch;
            }
        }
        fields.push_back(std::move(current));
        return fields;
    };
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (line[0] == '#') {
            std::string body = line.substr(line.find_first_not_of("# "));
            auto eq = body.find('=');
            if (eq == std::string::npos) continue;
            std::string key = body.substr(0, eq);
            std::string value = body.substr(eq + 1);
            if (key == "report") report.title = value;
            else report.add_provenance(key, value);
            continue;
        }
        if (!have_columns) {
            report.columns = split(line);
            have_columns = true;
        } else {
            report.add_row(split(line));
        }
    }
    return report;
}

inline std::string complexity_cell(Complexity c) { return c.str(); }

}  // namespace aslab
