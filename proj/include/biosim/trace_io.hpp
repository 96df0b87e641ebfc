#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "biosim/env.hpp"

namespace biosim {

/// Header: day,stage,healthy,infected,degraded,action,grade,cells_sprayed,r_yield,r_cost
void write_trace_csv(std::ostream& out, const EpisodeTrace& trace);
/// One JSON object per day with the same fields as the CSV.
void write_trace_jsonl(std::ostream& out, const EpisodeTrace& trace);
std::vector<TraceRow> read_trace_csv(const std::string& path);

/// Binary PPM (P6) of the health grid, `scale` pixels per cell. Non-growable cells are black.
void write_health_ppm(std::ostream& out, const Field& field, int scale = 8);

}  // namespace biosim
