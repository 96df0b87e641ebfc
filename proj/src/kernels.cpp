#include "biosim/kernels.hpp"

#include <algorithm>
#include <cstdlib>
#include <stdexcept>
#include <vector>

namespace biosim::kernels {

void infection_pressure_serial(const Field& field, const SpreadParams& params, std::span<double> out) {
    if (out.size() != field.cells.size()) throw std::invalid_argument("output size mismatch");
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = infection_probability(field.cells.cell(i), field, params);
}

namespace {

struct Offset {
    int dr;
    int dc;
    double weight;
};

}  // namespace

void infection_pressure_omp(const Field& field, const SpreadParams& params, std::span<double> out) {
    if (out.size() != field.cells.size()) throw std::invalid_argument("output size mismatch");
    const int radius = params.outer_radius();
    // Same visiting order as the reference so the floating-point sums agree exactly.
    std::vector<Offset> offsets;
    for (int dr = -radius; dr <= radius; ++dr)
        for (int dc = -radius; dc <= radius; ++dc)
            if (dr != 0 || dc != 0)
                offsets.push_back({dr, dc, pis(zone_for_distance(std::max(std::abs(dr), std::abs(dc)), params), params)});

    const int rows = field.rows();
    const int cols = field.cols();
    const auto* cells = field.cells.values().data();
    const auto* growable = field.growable.values().data();

#pragma omp parallel for schedule(static)
    for (int r = 0; r < rows; ++r) {
        for (int c = 0; c < cols; ++c) {
            const std::size_t i = static_cast<std::size_t>(r) * cols + c;
            const auto& rec = cells[i];
            if (!growable[i] || rec.state != HealthState::Healthy) {
                out[i] = 0.0;
                continue;
            }
            int neighbours = 0;
            double pressure = 0.0;
            for (const auto& o : offsets) {
                const int nr = r + o.dr;
                const int nc = c + o.dc;
                if (nr < 0 || nc < 0 || nr >= rows || nc >= cols) continue;
                const std::size_t j = static_cast<std::size_t>(nr) * cols + nc;
                if (!growable[j]) continue;
                ++neighbours;
                if (cells[j].state == HealthState::Infected) pressure += o.weight;
            }
            out[i] = neighbours == 0 ? 0.0 : std::clamp(susceptibility(rec, params) * pressure / neighbours, 0.0, 1.0);
        }
    }
}

}  // namespace biosim::kernels
