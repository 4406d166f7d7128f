#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "projstat/measures.hpp"
#include "projstat/tomo.hpp"

namespace projstat {

struct MatrixFormat {
    /// 0 picks the first of ',', ';', tab found in the first line, else whitespace.
    char delimiter = 0;
    /// Treat the final column as an integer class label.
    bool label_column = false;
};

/// Reads delimiter-separated 0/1 rows, one observation per line, with an
/// optional header line (detected when a cell is not numeric) and an
/// optional final label column. Throws DataError naming the row and column
/// of the first malformed cell.
Sample load_binary_matrix(const std::string& path, const MatrixFormat& fmt = {});
Sample parse_binary_matrix(std::istream& in, const MatrixFormat& fmt = {},
                           const std::string& source = "<stream>");

/// Writes one row per line, the label last when the sample is labeled.
void write_binary_matrix(std::ostream& out, const Sample& s, char delimiter = ',');

/// "x,y" per line; optional header.
tomo::PointSet load_point_set(const std::string& path, double spacing = 0.05);
void write_point_set(std::ostream& out, const tomo::PointSet& f);

/// One metric value of one replicate of one experiment.
struct ResultRecord {
    std::string experiment;
    std::vector<std::pair<std::string, std::string>> params;
    std::string metric;
    double value = 0.0;
    /// -1 marks aggregates over replicates.
    std::int64_t replicate = 0;
    std::uint64_t seed = 0;
};

enum class ResultFormat { Csv, JsonLines };

ResultFormat parse_result_format(const std::string& name);

/// "%.10g", with "inf", "-inf" and "nan" spelled out.
std::string format_value(double v);

/// Stable-sorts by (replicate, metric) and writes one record per line.
void emit_results(std::vector<ResultRecord> records, std::ostream& out, ResultFormat format);
void emit_results(std::vector<ResultRecord> records, const std::string& path, ResultFormat format);

}  // namespace projstat
