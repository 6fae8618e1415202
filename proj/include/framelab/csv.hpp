#pragma once

#include <charconv>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "common.hpp"

namespace framelab {

struct CsvTable {
    std::vector<std::string> header;      // empty when the file had no header
    std::vector<std::vector<double>> rows;
};

inline std::string csv_join(const std::vector<std::string>& fields) {
    std::string line;
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i) line += ',';
        line += fields[i];
    }
    return line;
}

inline void write_csv(const std::string& path, const std::vector<std::string>& header,
                      const std::vector<std::vector<double>>& rows) {
    std::ofstream out(path, std::ios::binary);  // binary keeps \n on every platform
    require(out.good(), "IoError", "cannot open " + path + " for writing");
    if (!header.empty()) out << csv_join(header) << '\n';
    std::vector<std::string> fields;
    for (const auto& row : rows) {
        fields.clear();
        for (double v : row) fields.push_back(format_double(v));
        out << csv_join(fields) << '\n';
    }
    require(out.good(), "IoError", "failed writing " + path);
}

inline std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            fields.push_back(cur);
            cur.clear();
        } else if (c != '\r') {
            cur += c;
        }
    }
    fields.push_back(cur);
    return fields;
}

inline bool parse_csv_number(const std::string& text, double& value) {
    const char* b = text.data();
    const char* e = b + text.size();
    while (b < e && (*b == ' ' || *b == '\t')) ++b;
    while (e > b && (*(e - 1) == ' ' || *(e - 1) == '\t')) --e;
    auto res = std::from_chars(b, e, value);
    return res.ec == std::errc{} && res.ptr == e;
}

/// Reads a CSV of numeric rows. A single leading non-numeric row is kept as
/// the header; any other non-numeric content is an error.
inline CsvTable read_csv(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    require(in.good(), "IoError", "cannot open " + path + " for reading");
    CsvTable table;
    std::string line;
    bool first = true;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line == "\r") continue;
        std::vector<std::string> fields = split_csv_line(line);
        std::vector<double> row;
        row.reserve(fields.size());
        bool numeric = true;
        for (const std::string& f : fields) {
            double v = 0.0;
            if (!parse_csv_number(f, v)) {
                numeric = false;
                break;
            }
            row.push_back(v);
        }
        if (!numeric) {
            require(first, "BadCsv",
                    path + ":" + std::to_string(line_no) + ": non-numeric row");
            table.header = fields;
        } else {
            table.rows.push_back(std::move(row));
        }
        first = false;
    }
    return table;
}

}  // namespace framelab
