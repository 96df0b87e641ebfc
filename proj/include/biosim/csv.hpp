#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace biosim {

struct CsvRow {
    std::size_t line = 0;
    std::vector<std::string> cells;
};

/// Minimal comma-separated reader: no quoting, cells whitespace-trimmed,
/// blank lines skipped. First non-blank line is the header.
struct CsvTable {
    std::string source;
    std::vector<std::string> header;
    std::vector<CsvRow> rows;
};

CsvTable parse_csv(std::string_view text, const std::string& source);
CsvTable read_csv_file(const std::string& path);

/// Parse cell `index` of `row` as a finite double; throws ParseError with the row's line.
double parse_number(const CsvRow& row, std::size_t index, const std::string& source);

std::string trim(std::string_view s);
std::vector<std::string> split(std::string_view s, char sep);

/// Round-trippable decimal rendering of a double.
std::string format_double(double v);

}  // namespace biosim
