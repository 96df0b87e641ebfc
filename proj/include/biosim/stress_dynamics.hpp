#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "biosim/grid.hpp"
#include "biosim/rng.hpp"

namespace biosim {

enum class HealthState : std::uint8_t { Healthy = 0, Infected = 1, Degraded = 2 };

struct SubRegionRecord {
    HealthState state = HealthState::Healthy;
    int days_infected = 0;            // current spell, or the last spell once recovered
    std::optional<int> onset_stage;   // growth stage when the spell began
    bool ever_sprayed = false;
    bool ever_recovered = false;
    double accrued_loss = 0.0;        // season-cumulative loss fraction
    double severity = 0.0;            // severity fixed at spell onset
};

/// Field state: growable mask plus one record per cell. Non-growable cells stay Healthy forever.
struct Field {
    Mask growable;
    Grid<SubRegionRecord> cells;

    Field() = default;
    explicit Field(const Mask& growable_mask)
        : growable(growable_mask), cells(growable_mask.rows(), growable_mask.cols()) {}

    int rows() const { return cells.rows(); }
    int cols() const { return cells.cols(); }
    bool is_growable(int r, int c) const { return growable(r, c) != 0; }
    std::size_t count(HealthState s) const;
    std::vector<CellIndex> cells_in(HealthState s) const;
};

enum class Zone { High, Medium, Low, Outside };

struct SpreadParams {
    double s_high = 0.30;
    double s_med = 0.15;
    double s_low = 0.05;
    std::array<int, 3> zone_radii{1, 2, 3};  // Chebyshev radii of the High/Medium/Low zones
    double lambda_reinfect = 0.5;
    double lambda_spray = 0.8;
    int t_degrade = 12;

    void validate() const;
    int outer_radius() const { return zone_radii[2]; }
};

/// Zone of a neighbour at Chebyshev distance `d` (d >= 1).
Zone zone_for_distance(int d, const SpreadParams& params);
double pis(Zone zone, const SpreadParams& params);

/// Susceptibility scale from a cell's treatment history.
double susceptibility(const SubRegionRecord& rec, const SpreadParams& params);

/// Per-day infection probability for `cell` from its infected neighbours. Zero for
/// cells that are not growable or not Healthy. Throws std::out_of_range off-grid.
double infection_probability(CellIndex cell, const Field& field, const SpreadParams& params);

struct TreatmentGrade {
    std::string label;
    double recovery_prob = 0.0;
    double cost_factor = 0.0;
};

/// NO / LE / ME / HE with recovery 0, 0.3, 0.5, 0.9 and cost factor 0, 0.6, 0.8, 1.0.
std::vector<TreatmentGrade> default_grades();
void validate_grades(const std::vector<TreatmentGrade>& grades);

/// Stage and severity assigned to spells that begin today.
struct OnsetInfo {
    int stage = 0;
    double severity = 0.0;
};

enum class Backend { Serial, OpenMP };

/// One synchronous spread day: a uniform is drawn for every Healthy growable cell in
/// row-major order, probabilities come from the pre-step snapshot, and surviving
/// infections age by one day. Returns the newly infected cells.
std::vector<CellIndex> spread_step(Field& field, const SpreadParams& params, const OnsetInfo& onset, Rng& rng,
                                   Backend backend = Backend::OpenMP);

struct TreatmentOutcome {
    std::size_t sprayed = 0;
    std::vector<CellIndex> recovered;
};

/// Spray `targets` (all must be Infected). Each recovers independently with the
/// grade's probability; `days_infected` keeps the finished spell length.
TreatmentOutcome apply_treatment(Field& field, const TreatmentGrade& grade, std::span<const CellIndex> targets,
                                 Rng& rng);

/// Spray every growable cell in `area` regardless of state; sprayed count is the area size.
TreatmentOutcome apply_whole_field(Field& field, const TreatmentGrade& grade, const Mask& area, Rng& rng);

/// Infected cells with days_infected >= t_degrade become Degraded. Returns them.
std::vector<CellIndex> degrade_step(Field& field, const SpreadParams& params);

/// Infect `n_seeds` distinct Healthy growable cells chosen uniformly.
std::vector<CellIndex> seed_infection(Field& field, int n_seeds, const OnsetInfo& onset, Rng& rng);

/// Start a new infection spell on a Healthy cell.
void infect(SubRegionRecord& rec, const OnsetInfo& onset);

}  // namespace biosim
