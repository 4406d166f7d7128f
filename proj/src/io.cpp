#include "projstat/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

#include "projstat/error.hpp"

namespace projstat {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

char detect_delimiter(const std::string& line) {
    for (char c : {',', ';', '\t'})
        if (line.find(c) != std::string::npos) return c;
    return ' ';
}

std::vector<std::string> split(const std::string& line, char delim) {
    std::vector<std::string> cells;
    if (delim == ' ') {
        std::istringstream is(line);
        std::string tok;
        while (is >> tok) cells.push_back(tok);
        return cells;
    }
    std::string cur;
    for (char c : line) {
        if (c == delim) {
            cells.push_back(trim(cur));
            cur.clear();
        } else {
            cur += c;
        }
    }
    cells.push_back(trim(cur));
    return cells;
}

bool parse_long(const std::string& cell, long& out) {
    if (cell.empty()) return false;
    std::size_t pos = 0;
    try {
        out = std::stol(cell, &pos);
    } catch (const std::exception&) {
        return false;
    }
    return pos == cell.size();
}

bool is_numeric(const std::string& cell) {
    if (cell.empty()) return false;
    std::size_t pos = 0;
    try {
        (void)std::stod(cell, &pos);
    } catch (const std::exception&) {
        return false;
    }
    return pos == cell.size();
}

[[noreturn]] void cell_error(const std::string& source, std::size_t row, std::size_t col,
                             const std::string& what) {
    throw DataError(source + ": row " + std::to_string(row) + ", column " + std::to_string(col) +
                    ": " + what);
}

}  // namespace

Sample parse_binary_matrix(std::istream& in, const MatrixFormat& fmt, const std::string& source) {
    Sample s;
    std::string line;
    std::size_t line_no = 0;
    std::size_t width = 0;
    char delim = fmt.delimiter;
    bool first = true;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        if (delim == 0) delim = detect_delimiter(line);
        const auto cells = split(line, delim);
        if (first) {
            first = false;
            if (std::any_of(cells.begin(), cells.end(),
                            [](const std::string& c) { return !is_numeric(c); }))
                continue;  // header
        }
        if (width == 0) {
            width = cells.size();
            if (fmt.label_column && width < 2)
                cell_error(source, line_no, 1, "a label column needs at least one feature column");
        } else if (cells.size() != width) {
            cell_error(source, line_no, std::min(cells.size(), width) + 1,
                       "expected " + std::to_string(width) + " cells, found " +
                           std::to_string(cells.size()));
        }
        const std::size_t features = fmt.label_column ? width - 1 : width;
        Point row(features);
        for (std::size_t j = 0; j < features; ++j) {
            long v = 0;
            if (!parse_long(cells[j], v) || (v != 0 && v != 1))
                cell_error(source, line_no, j + 1, "entry '" + cells[j] + "' is not 0 or 1");
            row[j] = static_cast<double>(v);
        }
        if (fmt.label_column) {
            long lab = 0;
            if (!parse_long(cells[features], lab) || lab < 0)
                cell_error(source, line_no, width,
                           "label '" + cells[features] + "' is not a nonnegative integer");
            s.labels.push_back(static_cast<int>(lab));
        }
        s.rows.push_back(std::move(row));
    }
    if (s.rows.empty()) throw DataError(source + ": no data rows");
    return s;
}

Sample load_binary_matrix(const std::string& path, const MatrixFormat& fmt) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open '" + path + "'");
    return parse_binary_matrix(in, fmt, path);
}

void write_binary_matrix(std::ostream& out, const Sample& s, char delimiter) {
    for (std::size_t i = 0; i < s.rows.size(); ++i) {
        const auto& row = s.rows[i];
        for (std::size_t j = 0; j < row.size(); ++j) {
            if (j) out << delimiter;
            out << (row[j] != 0.0 ? '1' : '0');
        }
        if (s.labeled()) out << delimiter << s.labels[i];
        out << '\n';
    }
}

tomo::PointSet load_point_set(const std::string& path, double spacing) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open '" + path + "'");
    tomo::PointSet f;
    f.spacing = spacing;
    std::string line;
    std::size_t line_no = 0;
    bool first = true;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        const auto cells = split(line, detect_delimiter(line));
        const bool numeric = cells.size() == 2 && is_numeric(cells[0]) && is_numeric(cells[1]);
        if (first && !numeric) {
            first = false;
            continue;
        }
        first = false;
        if (cells.size() != 2) cell_error(path, line_no, 1, "expected two coordinates");
        for (std::size_t j = 0; j < 2; ++j)
            if (!is_numeric(cells[j])) cell_error(path, line_no, j + 1, "'" + cells[j] + "' is not a number");
        f.points.push_back({std::stod(cells[0]), std::stod(cells[1])});
    }
    if (f.points.empty()) throw DataError(path + ": empty point set");
    return f;
}

void write_point_set(std::ostream& out, const tomo::PointSet& f) {
    out << "x,y\n";
    for (const auto& p : f.points) out << format_value(p[0]) << ',' << format_value(p[1]) << '\n';
}

ResultFormat parse_result_format(const std::string& name) {
    if (name == "csv") return ResultFormat::Csv;
    if (name == "json-lines" || name == "jsonl") return ResultFormat::JsonLines;
    throw std::invalid_argument("unknown result format '" + name + "'");
}

std::string format_value(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

namespace {

std::string params_string(const ResultRecord& r) {
    std::string s;
    for (const auto& [k, v] : r.params) {
        if (!s.empty()) s += ';';
        s += k + '=' + v;
    }
    return s;
}

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char c : s) q += c == '"' ? std::string("\"\"") : std::string(1, c);
    return q + '"';
}

}  // namespace

void emit_results(std::vector<ResultRecord> records, std::ostream& out, ResultFormat format) {
    std::stable_sort(records.begin(), records.end(), [](const ResultRecord& a, const ResultRecord& b) {
        if (a.replicate != b.replicate) return a.replicate < b.replicate;
        return a.metric < b.metric;
    });
    if (format == ResultFormat::Csv) {
        out << "experiment,params,metric,value,replicate,seed\n";
        for (const auto& r : records)
            out << csv_field(r.experiment) << ',' << csv_field(params_string(r)) << ','
                << csv_field(r.metric) << ',' << format_value(r.value) << ',' << r.replicate << ','
                << r.seed << '\n';
        return;
    }
    for (const auto& r : records) {
        nlohmann::ordered_json j;
        j["experiment"] = r.experiment;
        nlohmann::ordered_json params = nlohmann::ordered_json::object();
        for (const auto& [k, v] : r.params) params[k] = v;
        j["params"] = params;
        j["metric"] = r.metric;
        if (std::isfinite(r.value))
            j["value"] = std::stod(format_value(r.value));
        else
            j["value"] = format_value(r.value);
        j["replicate"] = r.replicate;
        j["seed"] = r.seed;
        out << j.dump() << '\n';
    }
}

void emit_results(std::vector<ResultRecord> records, const std::string& path, ResultFormat format) {
    if (path.empty() || path == "-") {
        emit_results(std::move(records), std::cout, format);
        return;
    }
    std::ofstream out(path);
    if (!out) throw DataError("cannot write '" + path + "'");
    emit_results(std::move(records), out, format);
}

}  // namespace projstat
