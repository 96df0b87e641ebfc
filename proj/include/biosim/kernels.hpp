#pragma once

#include <span>

#include "biosim/stress_dynamics.hpp"

namespace biosim::kernels {

// Both fill out[i] (row-major) with the infection probability of cell i and 0
// for cells that cannot be infected. Results are bitwise identical.

/// Reference: evaluates infection_probability cell by cell.
void infection_pressure_serial(const Field& field, const SpreadParams& params, std::span<double> out);

/// Stencil over a precomputed offset table, rows split across OpenMP threads.
void infection_pressure_omp(const Field& field, const SpreadParams& params, std::span<double> out);

}  // namespace biosim::kernels
