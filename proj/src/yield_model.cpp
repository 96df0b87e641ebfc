#include "biosim/yield_model.hpp"

#include <algorithm>
#include <cmath>

#include "biosim/csv.hpp"
#include "biosim/error.hpp"
#include "biosim/stress_dynamics.hpp"

namespace biosim {

void GrowthCalendar::validate() const {
    if (season_length < 1) throw Error("season_length must be positive");
    for (int i = 0; i < kReproductiveStages; ++i) {
        if (stage_start_days[i] < 0 || stage_start_days[i] >= season_length) {
            throw Error("stage start days must lie within the season");
        }
        if (i > 0 && stage_start_days[i] <= stage_start_days[i - 1]) {
            throw Error("stage start days must be strictly increasing");
        }
    }
    if (onset_first < 0 || onset_last < onset_first || onset_last >= season_length) {
        throw Error("onset window must be a non-empty range within the season");
    }
    if (stage_start_days[0] > onset_first) throw Error("onset window must not begin before R1");
}

int growth_stage(int day, const GrowthCalendar& cal) {
    if (day < 0 || day >= cal.season_length) throw Error("day " + std::to_string(day) + " is outside the season");
    int stage = 0;
    for (int i = 0; i < kReproductiveStages; ++i) {
        if (cal.stage_start_days[i] <= day) stage = i + 1;
    }
    return stage;
}

std::array<double, kReproductiveStages> YieldParams::default_y_min() {
    std::array<double, kReproductiveStages> y{};
    for (int i = 0; i < kReproductiveStages; ++i) y[i] = 0.10 + 0.80 * i / (kReproductiveStages - 1);
    return y;
}

double YieldParams::y_min(int stage) const {
    if (stage < 1 || stage > kReproductiveStages) throw Error("yield loss requires a reproductive stage (R1..R7)");
    return y_min_by_stage[stage - 1];
}

void YieldParams::validate() const {
    if (!(t_half > 0.0)) throw Error("t_half must be positive");
    for (int i = 0; i < kReproductiveStages; ++i) {
        if (!(y_min_by_stage[i] >= 0.0 && y_min_by_stage[i] < 1.0)) throw Error("y_min values must lie in [0,1)");
        if (i > 0 && y_min_by_stage[i] < y_min_by_stage[i - 1]) throw Error("y_min must be non-decreasing by stage");
    }
    if (!(uay > 0.0) || !(ppb > 0.0) || !(upp > 0.0)) throw Error("uay, ppb and upp must be positive");
}

double eta_y(double t_inf, int g_inf, const YieldParams& params) {
    const double floor = params.y_min(g_inf);
    // exp(x) / (1 + exp(x)) written to stay finite for large |x|.
    const double x = -t_inf + params.t_half;
    const double s = x >= 0.0 ? 1.0 / (1.0 + std::exp(-x)) : std::exp(x) / (1.0 + std::exp(x));
    return floor + (1.0 - floor) * s;
}

double yield_loss(double t_inf, int g_inf, double severity, const YieldParams& params) {
    return (1.0 - eta_y(t_inf, g_inf, params)) * severity;
}

void WeatherTable::validate() const {
    if (temp_axis.size() < 2 || precip_axis.size() < 2) throw Error("severity table needs at least 2x2 entries");
    auto increasing = [](const std::vector<double>& a) { return std::adjacent_find(a.begin(), a.end(), std::greater_equal<>()) == a.end(); };
    if (!increasing(temp_axis) || !increasing(precip_axis)) throw Error("severity table axes must be strictly increasing");
    if (values.rows() != static_cast<int>(precip_axis.size()) || values.cols() != static_cast<int>(temp_axis.size())) {
        throw Error("severity table body does not match its axes");
    }
    for (double v : values.values()) {
        if (!(v >= 0.0 && v <= 1.0)) throw Error("severity table entries must lie in [0,1]");
    }
}

void validate_severity(const SeverityModel& model) {
    if (const auto* c = std::get_if<ConstantSeverity>(&model)) {
        if (!(c->value >= 0.0 && c->value <= 1.0)) throw Error("constant severity must lie in [0,1]");
    } else {
        std::get<WeatherTable>(model).validate();
    }
}

namespace {

// Index i such that axis[i] <= x <= axis[i+1], with the fraction along that span; x is clamped.
std::pair<std::size_t, double> locate(const std::vector<double>& axis, double x) {
    x = std::clamp(x, axis.front(), axis.back());
    auto it = std::upper_bound(axis.begin(), axis.end(), x);
    std::size_t i = it == axis.begin() ? 0 : static_cast<std::size_t>(it - axis.begin()) - 1;
    i = std::min(i, axis.size() - 2);
    return {i, (x - axis[i]) / (axis[i + 1] - axis[i])};
}

}  // namespace

double severity(const SeverityModel& model, const std::optional<WeatherDay>& weather_day) {
    if (const auto* c = std::get_if<ConstantSeverity>(&model)) return c->value;
    const auto& table = std::get<WeatherTable>(model);
    if (!weather_day) throw ConfigError("input_files", "weather_file", "severity table requires a weather source");
    const auto [pi, pf] = locate(table.precip_axis, weather_day->precip_mm);
    const auto [ti, tf] = locate(table.temp_axis, weather_day->tavg_c);
    const int r = static_cast<int>(pi);
    const int c = static_cast<int>(ti);
    const double v00 = table.values(r, c), v01 = table.values(r, c + 1);
    const double v10 = table.values(r + 1, c), v11 = table.values(r + 1, c + 1);
    const double v = (1 - pf) * ((1 - tf) * v00 + tf * v01) + pf * ((1 - tf) * v10 + tf * v11);
    return std::clamp(v, 0.0, 1.0);
}

double accrue_loss(SubRegionRecord& record, double severity, const YieldParams& params) {
    if (!record.onset_stage) return 0.0;
    double target = 0.0;
    if (record.state == HealthState::Degraded) {
        target = (1.0 - params.y_min(*record.onset_stage)) * severity;
    } else {
        target = yield_loss(record.days_infected, *record.onset_stage, severity, params);
    }
    const double increment = std::max(0.0, target - record.accrued_loss);
    record.accrued_loss = std::min(1.0, record.accrued_loss + increment);
    return increment;
}

WeatherTable load_severity_table(const std::string& path) {
    const CsvTable csv = read_csv_file(path);
    WeatherTable table;
    for (std::size_t j = 1; j < csv.header.size(); ++j) {
        CsvRow hdr{1, csv.header};
        table.temp_axis.push_back(parse_number(hdr, j, path));
    }
    table.values = Grid<double>(static_cast<int>(csv.rows.size()), static_cast<int>(table.temp_axis.size()));
    for (std::size_t i = 0; i < csv.rows.size(); ++i) {
        table.precip_axis.push_back(parse_number(csv.rows[i], 0, path));
        for (std::size_t j = 0; j < table.temp_axis.size(); ++j) {
            table.values(static_cast<int>(i), static_cast<int>(j)) = parse_number(csv.rows[i], j + 1, path);
        }
    }
    try {
        table.validate();
    } catch (const Error& e) {
        throw ParseError(path, 0, e.what());
    }
    return table;
}

}  // namespace biosim
