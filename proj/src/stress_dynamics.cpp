#include "biosim/stress_dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "biosim/error.hpp"
#include "biosim/kernels.hpp"

namespace biosim {

std::size_t Field::count(HealthState s) const {
    std::size_t n = 0;
    for (int r = 0; r < rows(); ++r)
        for (int c = 0; c < cols(); ++c) n += is_growable(r, c) && cells(r, c).state == s;
    return n;
}

std::vector<CellIndex> Field::cells_in(HealthState s) const {
    std::vector<CellIndex> out;
    for (int r = 0; r < rows(); ++r)
        for (int c = 0; c < cols(); ++c)
            if (is_growable(r, c) && cells(r, c).state == s) out.push_back({r, c});
    return out;
}

void SpreadParams::validate() const {
    if (!(0.0 <= s_low && s_low <= s_med && s_med <= s_high && s_high <= 1.0)) {
        throw Error("spread probabilities must satisfy 0 <= s_low <= s_med <= s_high <= 1");
    }
    if (!(zone_radii[0] >= 1 && zone_radii[0] < zone_radii[1] && zone_radii[1] < zone_radii[2])) {
        throw Error("zone radii must be positive and strictly increasing");
    }
    if (!(lambda_reinfect > 0.0 && lambda_reinfect < lambda_spray && lambda_spray <= 1.0)) {
        throw Error("susceptibility scales must satisfy 0 < lambda_reinfect < lambda_spray <= 1");
    }
    if (t_degrade < 1) throw Error("t_degrade must be at least 1");
}

Zone zone_for_distance(int d, const SpreadParams& params) {
    if (d <= params.zone_radii[0]) return Zone::High;
    if (d <= params.zone_radii[1]) return Zone::Medium;
    if (d <= params.zone_radii[2]) return Zone::Low;
    return Zone::Outside;
}

double pis(Zone zone, const SpreadParams& params) {
    switch (zone) {
        case Zone::High: return params.s_high;
        case Zone::Medium: return params.s_med;
        case Zone::Low: return params.s_low;
        case Zone::Outside: return 0.0;
    }
    return 0.0;
}

double susceptibility(const SubRegionRecord& rec, const SpreadParams& params) {
    if (rec.ever_recovered) return params.lambda_reinfect;
    if (rec.ever_sprayed) return params.lambda_spray;
    return 1.0;
}

double infection_probability(CellIndex cell, const Field& field, const SpreadParams& params) {
    if (!field.cells.contains(cell)) throw std::out_of_range("cell outside grid");
    const auto& rec = field.cells[cell];
    if (!field.is_growable(cell.row, cell.col) || rec.state != HealthState::Healthy) return 0.0;
    const int radius = params.outer_radius();
    int neighbours = 0;
    double pressure = 0.0;
    for (int r = cell.row - radius; r <= cell.row + radius; ++r) {
        for (int c = cell.col - radius; c <= cell.col + radius; ++c) {
            if (!field.cells.contains(r, c) || (r == cell.row && c == cell.col) || !field.is_growable(r, c)) continue;
            ++neighbours;
            if (field.cells(r, c).state == HealthState::Infected) {
                const int d = std::max(std::abs(r - cell.row), std::abs(c - cell.col));
                pressure += pis(zone_for_distance(d, params), params);
            }
        }
    }
    if (neighbours == 0) return 0.0;
    return std::clamp(susceptibility(rec, params) * pressure / neighbours, 0.0, 1.0);
}

std::vector<TreatmentGrade> default_grades() {
    return {{"NO", 0.0, 0.0}, {"LE", 0.3, 0.6}, {"ME", 0.5, 0.8}, {"HE", 0.9, 1.0}};
}

void validate_grades(const std::vector<TreatmentGrade>& grades) {
    if (grades.empty()) throw Error("action set is empty");
    if (grades.front().recovery_prob != 0.0 || grades.front().cost_factor != 0.0) {
        throw Error("first action must be 'no spray' with zero recovery and zero cost");
    }
    for (std::size_t i = 0; i < grades.size(); ++i) {
        const auto& g = grades[i];
        if (!(g.recovery_prob >= 0.0 && g.recovery_prob <= 1.0)) throw Error("recovery probability must lie in [0,1]");
        if (!(g.cost_factor >= 0.0) || !std::isfinite(g.cost_factor)) throw Error("cost factor must be non-negative");
        if (i > 0 && !(g.recovery_prob > grades[i - 1].recovery_prob)) {
            throw Error("recovery probability must increase strictly along the action set");
        }
    }
}

void infect(SubRegionRecord& rec, const OnsetInfo& onset) {
    rec.state = HealthState::Infected;
    rec.days_infected = 1;
    rec.onset_stage = onset.stage;
    rec.severity = onset.severity;
}

std::vector<CellIndex> spread_step(Field& field, const SpreadParams& params, const OnsetInfo& onset, Rng& rng,
                                   Backend backend) {
    const std::size_t n = field.cells.size();
    std::vector<double> draws(n, 1.0);
    bool any_infected = false;
    for (std::size_t i = 0; i < n; ++i) {
        const auto cell = field.cells.cell(i);
        const auto& rec = field.cells[cell];
        if (!field.is_growable(cell.row, cell.col)) continue;
        if (rec.state == HealthState::Healthy) draws[i] = uniform01(rng);
        any_infected |= rec.state == HealthState::Infected;
    }
    std::vector<CellIndex> newly;
    if (!any_infected) return newly;

    std::vector<double> prob(n, 0.0);
    if (backend == Backend::Serial) {
        kernels::infection_pressure_serial(field, params, prob);
    } else {
        kernels::infection_pressure_omp(field, params, prob);
    }
    for (std::size_t i = 0; i < n; ++i) {
        auto& rec = field.cells.values()[i];
        if (rec.state == HealthState::Infected) {
            ++rec.days_infected;
        } else if (draws[i] < prob[i]) {
            newly.push_back(field.cells.cell(i));
        }
    }
    for (const auto& c : newly) infect(field.cells[c], onset);
    return newly;
}

TreatmentOutcome apply_treatment(Field& field, const TreatmentGrade& grade, std::span<const CellIndex> targets,
                                 Rng& rng) {
    TreatmentOutcome out;
    if (grade.recovery_prob == 0.0 && grade.cost_factor == 0.0) return out;  // no spray
    for (const auto& t : targets) {
        if (!field.cells.contains(t)) throw std::out_of_range("treatment target outside grid");
        if (!field.is_growable(t.row, t.col) || field.cells[t].state != HealthState::Infected) {
            throw Error("treatment targets must be infected sub-regions");
        }
    }
    for (const auto& t : targets) {
        auto& rec = field.cells[t];
        rec.ever_sprayed = true;
        if (uniform01(rng) < grade.recovery_prob) {
            rec.state = HealthState::Healthy;
            rec.ever_recovered = true;
            out.recovered.push_back(t);
        }
    }
    out.sprayed = targets.size();
    return out;
}

TreatmentOutcome apply_whole_field(Field& field, const TreatmentGrade& grade, const Mask& area, Rng& rng) {
    TreatmentOutcome out;
    if (grade.recovery_prob == 0.0 && grade.cost_factor == 0.0) return out;
    for (int r = 0; r < field.rows(); ++r) {
        for (int c = 0; c < field.cols(); ++c) {
            if (!field.is_growable(r, c) || !area(r, c)) continue;
            auto& rec = field.cells(r, c);
            rec.ever_sprayed = true;
            ++out.sprayed;
            if (rec.state == HealthState::Infected && uniform01(rng) < grade.recovery_prob) {
                rec.state = HealthState::Healthy;
                rec.ever_recovered = true;
                out.recovered.push_back({r, c});
            }
        }
    }
    return out;
}

std::vector<CellIndex> degrade_step(Field& field, const SpreadParams& params) {
    std::vector<CellIndex> out;
    for (std::size_t i = 0; i < field.cells.size(); ++i) {
        auto& rec = field.cells.values()[i];
        if (rec.state == HealthState::Infected && rec.days_infected >= params.t_degrade) {
            rec.state = HealthState::Degraded;
            out.push_back(field.cells.cell(i));
        }
    }
    return out;
}

std::vector<CellIndex> seed_infection(Field& field, int n_seeds, const OnsetInfo& onset, Rng& rng) {
    if (n_seeds < 1) throw Error("n_seeds must be at least 1");
    const auto healthy = field.cells_in(HealthState::Healthy);
    if (healthy.size() < static_cast<std::size_t>(n_seeds)) throw Error("not enough healthy cells to seed");
    std::vector<CellIndex> chosen;
    chosen.reserve(static_cast<std::size_t>(n_seeds));
    std::sample(healthy.begin(), healthy.end(), std::back_inserter(chosen), n_seeds, rng);
    for (const auto& c : chosen) infect(field.cells[c], onset);
    return chosen;
}

}  // namespace biosim
