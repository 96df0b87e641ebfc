#include "biosim/trace_io.hpp"

#include <array>
#include <ostream>

#include <json.hpp>

#include "biosim/csv.hpp"
#include "biosim/error.hpp"

namespace biosim {

namespace {

const std::vector<std::string> kTraceHeader{"day",     "stage", "healthy",       "infected", "degraded",
                                            "action",  "grade", "cells_sprayed", "r_yield",  "r_cost"};

}  // namespace

void write_trace_csv(std::ostream& out, const EpisodeTrace& trace) {
    for (std::size_t i = 0; i < kTraceHeader.size(); ++i) out << (i ? "," : "") << kTraceHeader[i];
    out << '\n';
    for (const auto& r : trace.rows) {
        out << r.day << ',' << r.stage << ',' << r.healthy << ',' << r.infected << ',' << r.degraded << ','
            << r.action << ',' << r.grade << ',' << r.cells_sprayed << ',' << format_double(r.r_yield) << ','
            << format_double(r.r_cost) << '\n';
    }
}

void write_trace_jsonl(std::ostream& out, const EpisodeTrace& trace) {
    for (const auto& r : trace.rows) {
        nlohmann::ordered_json j;
        j["day"] = r.day;
        j["stage"] = r.stage;
        j["healthy"] = r.healthy;
        j["infected"] = r.infected;
        j["degraded"] = r.degraded;
        j["action"] = r.action;
        j["grade"] = r.grade;
        j["cells_sprayed"] = r.cells_sprayed;
        j["r_yield"] = r.r_yield;
        j["r_cost"] = r.r_cost;
        out << j.dump() << '\n';
    }
}

std::vector<TraceRow> read_trace_csv(const std::string& path) {
    const CsvTable csv = read_csv_file(path);
    if (csv.header != kTraceHeader) throw ParseError(path, 1, "unexpected trace header");
    std::vector<TraceRow> rows;
    rows.reserve(csv.rows.size());
    for (const auto& row : csv.rows) {
        auto count = [&](std::size_t i) {
            const double v = parse_number(row, i, path);
            if (v < 0 || v != static_cast<double>(static_cast<long long>(v))) {
                throw ParseError(path, row.line, "expected a non-negative integer in column " + kTraceHeader[i]);
            }
            return static_cast<std::size_t>(v);
        };
        TraceRow r;
        r.day = static_cast<int>(count(0));
        r.stage = static_cast<int>(count(1));
        r.healthy = count(2);
        r.infected = count(3);
        r.degraded = count(4);
        r.action = static_cast<int>(count(5));
        r.grade = row.cells[6];
        r.cells_sprayed = count(7);
        r.r_yield = parse_number(row, 8, path);
        r.r_cost = parse_number(row, 9, path);
        rows.push_back(std::move(r));
    }
    return rows;
}

void write_health_ppm(std::ostream& out, const Field& field, int scale) {
    static constexpr std::array<std::array<unsigned char, 3>, 4> palette{{
        {46, 139, 87},   // healthy
        {230, 160, 30},  // infected
        {120, 60, 30},   // degraded
        {0, 0, 0},       // not growable
    }};
    scale = std::max(1, scale);
    out << "P6\n" << field.cols() * scale << ' ' << field.rows() * scale << "\n255\n";
    for (int r = 0; r < field.rows(); ++r) {
        for (int sy = 0; sy < scale; ++sy) {
            for (int c = 0; c < field.cols(); ++c) {
                const std::size_t k = field.is_growable(r, c) ? static_cast<std::size_t>(field.cells(r, c).state) : 3;
                for (int sx = 0; sx < scale; ++sx) out.write(reinterpret_cast<const char*>(palette[k].data()), 3);
            }
        }
    }
}

}  // namespace biosim
