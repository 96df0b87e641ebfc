#include "biosim/env.hpp"

#include <cmath>

#include "biosim/error.hpp"

namespace biosim {

namespace {

template <typename F>
void check(std::vector<ConfigIssue>& issues, const char* section, const char* key, F&& fn) {
    try {
        fn();
    } catch (const ConfigError& e) {
        issues.insert(issues.end(), e.issues().begin(), e.issues().end());
    } catch (const Error& e) {
        issues.push_back({section, key, e.what()});
    }
}

}  // namespace

void EnvConfig::validate() const {
    std::vector<ConfigIssue> issues;
    check(issues, "env", "grid", [&] { grid.validate(); });
    check(issues, "threat", "spread", [&] { spread.validate(); });
    check(issues, "yield", "yield", [&] { yield.validate(); });
    check(issues, "env", "calendar", [&] { calendar.validate(); });
    check(issues, "yield", "severity", [&] { validate_severity(severity); });
    check(issues, "agent", "action", [&] { validate_grades(actions); });
    if (n_seeds < 1) issues.push_back({"env", "n_seeds", "must be at least 1"});
    if (!(cell_area_acres > 0.0) || !std::isfinite(cell_area_acres)) {
        issues.push_back({"cost", "cell_area_acres", "must be positive"});
    }
    if (std::holds_alternative<WeatherTable>(severity) && !weather) {
        issues.push_back({"input_files", "weather_file", "severity table requires a weather source"});
    }
    if (weather && static_cast<int>(weather->size()) != calendar.season_length) {
        issues.push_back({"input_files", "weather_file", "weather series length must equal the season length"});
    }
    if (manageable) {
        if (manageable->rows() != grid.rows || manageable->cols() != grid.cols) {
            issues.push_back({"input_files", "manageable_shape_file", "manageable mask dimensions mismatch"});
        } else {
            std::size_t n = 0;
            bool subset = true;
            for (std::size_t i = 0; i < manageable->size(); ++i) {
                if (!manageable->values()[i]) continue;
                ++n;
                subset &= grid.growable.values()[i] != 0;
            }
            if (n == 0) issues.push_back({"input_files", "manageable_shape_file", "manageable area is empty"});
            if (!subset) issues.push_back({"input_files", "manageable_shape_file", "manageable area exceeds the field"});
        }
    }
    if (!issues.empty()) throw ConfigError(std::move(issues));
}

Mask EnvConfig::manageable_area() const { return manageable ? *manageable : grid.growable; }

Environment::Environment(EnvConfig config) : config_(std::move(config)) {
    config_.validate();
    manageable_ = config_.manageable_area();
    manageable_count_ = count_set(manageable_);
    growable_count_ = config_.grid.growable_count();
    field_ = Field(config_.grid.growable);
}

Observation Environment::reset(std::uint64_t seed) {
    rng_.seed(seed);
    field_ = Field(config_.grid.growable);
    day_ = 0;
    started_ = true;
    std::uniform_int_distribution<int> onset(config_.calendar.onset_first, config_.calendar.onset_last);
    onset_day_ = onset(rng_);
    return observe();
}

void Environment::set_onset_day(std::optional<int> day) {
    if (day && (*day < config_.calendar.stage_start_days[0] || *day >= config_.calendar.season_length)) {
        throw Error("onset day must fall between R1 and the end of the season");
    }
    onset_day_ = day;
}

Observation Environment::observe() const {
    Observation obs;
    obs.day = day_;
    obs.health = Grid<std::uint8_t>(field_.rows(), field_.cols(), 0);
    for (std::size_t i = 0; i < obs.health.size(); ++i) {
        if (manageable_.values()[i]) obs.health.values()[i] = static_cast<std::uint8_t>(field_.cells.values()[i].state);
    }
    return obs;
}

double Environment::total_loss() const {
    double sum = 0.0;
    for (std::size_t i = 0; i < field_.cells.size(); ++i) {
        if (field_.growable.values()[i]) sum += field_.cells.values()[i].accrued_loss;
    }
    return sum;
}

OnsetInfo Environment::onset_info(int day) const {
    std::optional<WeatherDay> w;
    if (config_.weather) w = (*config_.weather)[static_cast<std::size_t>(day)];
    return {growth_stage(day, config_.calendar), severity(config_.severity, w)};
}

StepResult Environment::step(int action, SprayMode mode) {
    if (!started_) throw Error("step called before reset");
    if (done()) throw Error("step called after the episode finished");
    if (action < 0 || action >= action_count()) throw Error("unknown action index " + std::to_string(action));

    const OnsetInfo today = onset_info(day_);
    if (onset_day_ && *onset_day_ == day_) seed_infection(field_, config_.n_seeds, today, rng_);

    const TreatmentGrade& grade = config_.actions[static_cast<std::size_t>(action)];
    TreatmentOutcome treated;
    if (action != 0) {
        if (mode == SprayMode::WholeField) {
            treated = apply_whole_field(field_, grade, manageable_, rng_);
        } else {
            std::vector<CellIndex> targets;
            for (const auto& c : field_.cells_in(HealthState::Infected)) {
                if (manageable_[c]) targets.push_back(c);
            }
            treated = apply_treatment(field_, grade, targets, rng_);
        }
    }

    double increments = 0.0;
    for (const auto& c : treated.recovered) {
        auto& rec = field_.cells[c];
        increments += accrue_loss(rec, rec.severity, config_.yield);
    }
    for (auto& rec : field_.cells.values()) {
        if (rec.state == HealthState::Infected) increments += accrue_loss(rec, rec.severity, config_.yield);
    }

    spread_step(field_, config_.spread, today, rng_);
    for (const auto& c : degrade_step(field_, config_.spread)) {
        auto& rec = field_.cells[c];
        increments += accrue_loss(rec, rec.severity, config_.yield);
    }

    StepResult result;
    result.reward_yield = -increments * config_.yield.uay * config_.yield.ppb;
    result.reward_cost = config_.cost_in_reward
                             ? -static_cast<double>(treated.sprayed) * grade.cost_factor * config_.yield.upp
                             : 0.0;
    // Keep both components non-positive even for a signed zero.
    if (result.reward_yield == 0.0) result.reward_yield = 0.0;
    if (result.reward_cost == 0.0) result.reward_cost = 0.0;
    result.reward = result.reward_yield + result.reward_cost;
    result.info.infected_count = field_.count(HealthState::Infected);
    result.info.degraded_count = field_.count(HealthState::Degraded);
    result.info.cells_sprayed = treated.sprayed;
    result.info.grade = action;

    ++day_;
    result.done = done();
    result.observation = observe();
    return result;
}

EpisodeTrace run_episode(Environment& env, Policy& policy, const StepObserver& observer) {
    if (env.day() != 0) throw Error("run_episode requires a freshly reset environment");
    const auto& cfg = env.config();
    EpisodeTrace trace;
    trace.rows.reserve(static_cast<std::size_t>(cfg.calendar.season_length));
    Observation obs = env.observe();
    while (!env.done()) {
        const int day = env.day();
        const int action = policy.act(obs);
        StepResult r = env.step(action, policy.spray_mode());
        TraceRow row;
        row.day = day;
        row.stage = growth_stage(day, cfg.calendar);
        row.infected = r.info.infected_count;
        row.degraded = r.info.degraded_count;
        row.healthy = env.growable_count() - row.infected - row.degraded;
        row.action = action;
        row.grade = cfg.actions[static_cast<std::size_t>(action)].label;
        row.cells_sprayed = r.info.cells_sprayed;
        row.r_yield = r.reward_yield;
        row.r_cost = r.reward_cost;
        trace.rows.push_back(std::move(row));
        trace.cells_sprayed += r.info.cells_sprayed;
        trace.pesticide_cost += static_cast<double>(r.info.cells_sprayed) *
                                cfg.actions[static_cast<std::size_t>(action)].cost_factor * cfg.yield.upp;
        trace.total_reward += r.reward;
        if (observer) observer(env, r);
        obs = std::move(r.observation);
    }
    trace.total_loss = env.total_loss();
    trace.loss_fraction = trace.total_loss / static_cast<double>(env.growable_count());
    trace.percent_sprayed = 100.0 * static_cast<double>(trace.cells_sprayed) / static_cast<double>(env.manageable_count());
    return trace;
}

}  // namespace biosim
