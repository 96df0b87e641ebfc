#include "biosim/csv.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "biosim/error.hpp"

namespace biosim {

std::string trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(first, last - first + 1));
}

std::vector<std::string> split(std::string_view s, char sep) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        const auto pos = s.find(sep, start);
        out.push_back(trim(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start)));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return out;
}

CsvTable parse_csv(std::string_view text, const std::string& source) {
    CsvTable table;
    table.source = source;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    bool have_header = false;
    while (pos <= text.size()) {
        const auto nl = text.find('\n', pos);
        const std::string_view line = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
        ++line_no;
        pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
        if (trim(line).empty()) continue;
        auto cells = split(line, ',');
        if (!have_header) {
            table.header = std::move(cells);
            have_header = true;
            continue;
        }
        if (cells.size() != table.header.size()) {
            throw ParseError(source, line_no,
                             "expected " + std::to_string(table.header.size()) + " columns, found " +
                                 std::to_string(cells.size()));
        }
        table.rows.push_back({line_no, std::move(cells)});
    }
    if (!have_header) throw ParseError(source, 0, "missing header");
    return table;
}

CsvTable read_csv_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError(path, 0, "cannot open file");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_csv(ss.str(), path);
}

double parse_number(const CsvRow& row, std::size_t index, const std::string& source) {
    if (index >= row.cells.size()) throw ParseError(source, row.line, "missing column");
    const std::string& cell = row.cells[index];
    double v = 0.0;
    const auto* first = cell.data();
    const auto* last = cell.data() + cell.size();
    const auto [ptr, ec] = std::from_chars(first, last, v);
    if (cell.empty() || ec != std::errc{} || ptr != last) {
        throw ParseError(source, row.line, "non-numeric value '" + cell + "'");
    }
    if (!std::isfinite(v)) throw ParseError(source, row.line, "non-finite value '" + cell + "'");
    return v;
}

std::string format_double(double v) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    (void)ec;
    return std::string(buf, ptr);
}

}  // namespace biosim
