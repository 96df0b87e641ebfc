#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "biosim/field_geometry.hpp"
#include "biosim/rng.hpp"
#include "biosim/stress_dynamics.hpp"
#include "biosim/yield_model.hpp"

namespace biosim {

struct EnvConfig {
    PlotGrid grid = default_rect_grid(FieldSpec{});
    SpreadParams spread;
    YieldParams yield;
    GrowthCalendar calendar;
    SeverityModel severity = ConstantSeverity{1.0};
    std::optional<WeatherSeries> weather;
    int n_seeds = 1;
    std::vector<TreatmentGrade> actions = default_grades();
    std::optional<Mask> manageable;  // observed / treated area; defaults to all growable cells
    bool observe_day = true;         // false: health-only observation
    bool cost_in_reward = true;      // false: reward is the yield term only
    double cell_area_acres = 0.01;

    /// Throws ConfigError; the only place a bad configuration is reported.
    void validate() const;
    Mask manageable_area() const;
};

/// Health codes: 0 Healthy, 1 Infected, 2 Degraded. Cells outside the
/// manageable area read as 0.
struct Observation {
    Grid<std::uint8_t> health;
    int day = 0;
};

enum class SprayMode {
    InfectedOnly,  // the grade is applied to infected manageable cells
    WholeField,    // every manageable cell is sprayed and costed
};

struct StepInfo {
    std::size_t infected_count = 0;
    std::size_t degraded_count = 0;
    std::size_t cells_sprayed = 0;
    int grade = 0;
};

struct StepResult {
    Observation observation;
    double reward = 0.0;
    double reward_yield = 0.0;
    double reward_cost = 0.0;
    bool done = false;
    StepInfo info;
};

class Environment {
public:
    explicit Environment(EnvConfig config);

    Observation reset(std::uint64_t seed);
    StepResult step(int action, SprayMode mode = SprayMode::InfectedOnly);

    const EnvConfig& config() const { return config_; }
    const Field& field() const { return field_; }
    int day() const { return day_; }
    bool done() const { return day_ >= config_.calendar.season_length; }
    std::optional<int> onset_day() const { return onset_day_; }
    std::size_t manageable_count() const { return manageable_count_; }
    std::size_t growable_count() const { return growable_count_; }
    int action_count() const { return static_cast<int>(config_.actions.size()); }
    Observation observe() const;

    /// Summed accrued loss fraction over all growable cells.
    double total_loss() const;

    /// Testing hook: override (or cancel, with nullopt) the scheduled onset day.
    /// The day must fall in a reproductive stage.
    void set_onset_day(std::optional<int> day);

private:
    OnsetInfo onset_info(int day) const;

    EnvConfig config_;
    Mask manageable_;
    std::size_t manageable_count_ = 0;
    std::size_t growable_count_ = 0;
    Field field_;
    Rng rng_;
    int day_ = 0;
    bool started_ = false;
    std::optional<int> onset_day_;
};

class Policy {
public:
    virtual ~Policy() = default;
    virtual int act(const Observation& obs) = 0;
    virtual SprayMode spray_mode() const { return SprayMode::InfectedOnly; }
    virtual std::unique_ptr<Policy> clone() const = 0;
    virtual std::string name() const = 0;
};

struct TraceRow {
    int day = 0;
    int stage = 0;
    std::size_t healthy = 0;
    std::size_t infected = 0;
    std::size_t degraded = 0;
    int action = 0;
    std::string grade;
    std::size_t cells_sprayed = 0;
    double r_yield = 0.0;
    double r_cost = 0.0;
};

struct EpisodeTrace {
    std::vector<TraceRow> rows;
    double total_loss = 0.0;       // summed loss fraction over cells
    double loss_fraction = 0.0;    // mean over growable cells
    double pesticide_cost = 0.0;   // sprayed cells x cost factor x UPP
    double percent_sprayed = 0.0;  // 100 x cell-applications / manageable cells
    std::size_t cells_sprayed = 0;
    double total_reward = 0.0;
};

using StepObserver = std::function<void(const Environment&, const StepResult&)>;

/// Drive a freshly reset environment to the end of the season.
EpisodeTrace run_episode(Environment& env, Policy& policy, const StepObserver& observer = {});

}  // namespace biosim
