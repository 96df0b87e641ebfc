#pragma once

#include <array>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "biosim/grid.hpp"

namespace biosim {

inline constexpr int kReproductiveStages = 7;  // R1..R7

/// Season calendar. Stage index 0 is vegetative, 1..7 are R1..R7.
struct GrowthCalendar {
    int season_length = 115;
    std::array<int, kReproductiveStages> stage_start_days{44, 54, 64, 74, 84, 94, 104};
    int onset_first = 44;  // inclusive infection-onset window
    int onset_last = 55;

    void validate() const;
};

int growth_stage(int day, const GrowthCalendar& cal);

struct YieldParams {
    double t_half = 6.0;  // infection days at which half the maximum loss has accrued
    std::array<double, kReproductiveStages> y_min_by_stage = default_y_min();
    double uay = 0.6;   // bushels per sub-region
    double ppb = 8.0;   // currency per bushel
    double upp = 0.17;  // currency per sub-region application

    void validate() const;
    double y_min(int stage) const;

    /// Linear ramp 0.10 (R1) .. 0.90 (R7).
    static std::array<double, kReproductiveStages> default_y_min();
};

struct ConstantSeverity {
    double value = 1.0;
};

/// Severity over (temperature, precipitation), bilinearly interpolated.
/// values(i, j) is the severity at precip_axis[i], temp_axis[j].
struct WeatherTable {
    std::vector<double> temp_axis;
    std::vector<double> precip_axis;
    Grid<double> values;

    void validate() const;
};

using SeverityModel = std::variant<ConstantSeverity, WeatherTable>;

struct WeatherDay {
    double tavg_c = 0.0;
    double precip_mm = 0.0;
};

using WeatherSeries = std::vector<WeatherDay>;

/// Retained-yield fraction after `t_inf` infected days for onset stage `g_inf` (1..7).
double eta_y(double t_inf, int g_inf, const YieldParams& params);

/// Severity-scaled loss fraction, (1 - eta_y) * severity.
double yield_loss(double t_inf, int g_inf, double severity, const YieldParams& params);

/// Throws ConfigError when a weather table is queried without weather input.
double severity(const SeverityModel& model, const std::optional<WeatherDay>& weather_day);

void validate_severity(const SeverityModel& model);

struct SubRegionRecord;

/// Bring `record.accrued_loss` up to the loss implied by its current spell
/// (or the full asymptotic loss if Degraded). Returns the increment, never negative.
double accrue_loss(SubRegionRecord& record, double severity, const YieldParams& params);

/// Severity table CSV: first row = temperature axis (first cell ignored),
/// first column = precipitation axis, body = severity values.
WeatherTable load_severity_table(const std::string& path);

}  // namespace biosim
