#include "biosim/agents.hpp"

#include <algorithm>
#include <ostream>

#include "biosim/csv.hpp"
#include "biosim/error.hpp"

namespace biosim {

int observation_size(const EnvConfig& config) {
    return config.grid.rows * config.grid.cols + (config.observe_day ? 1 : 0);
}

void encode_observation_into(const Observation& obs, const EnvConfig& config, Eigen::Ref<Eigen::VectorXd> out) {
    const std::size_t n = obs.health.size();
    if (static_cast<std::size_t>(out.size()) != n + (config.observe_day ? 1 : 0)) {
        throw Error("observation does not match the configured grid");
    }
    for (std::size_t i = 0; i < n; ++i) out(static_cast<Eigen::Index>(i)) = obs.health.values()[i] * 0.5;
    if (config.observe_day) out(static_cast<Eigen::Index>(n)) = static_cast<double>(obs.day) / config.calendar.season_length;
}

Eigen::VectorXd encode_observation(const Observation& obs, const EnvConfig& config) {
    Eigen::VectorXd v(observation_size(config));
    encode_observation_into(obs, config, v);
    return v;
}

SchedulePolicy::SchedulePolicy(int spray_day, int grade) : spray_day_(spray_day), grade_(grade) {
    if (spray_day < 0) throw Error("spray day must be within the season");
    if (grade < 0) throw Error("grade index must be non-negative");
}

ReactivePolicy::ReactivePolicy(int threshold, int grade) : threshold_(threshold), grade_(grade) {
    if (threshold < 1) throw Error("reactive threshold must be at least 1");
    if (grade < 0) throw Error("grade index must be non-negative");
}

int ReactivePolicy::act(const Observation& obs) {
    const auto infected = std::count(obs.health.values().begin(), obs.health.values().end(),
                                     static_cast<std::uint8_t>(HealthState::Infected));
    return infected >= threshold_ ? grade_ : 0;
}

NetworkPolicy::NetworkPolicy(nn::Mlp net, const EnvConfig& config, std::string name)
    : net_(std::move(net)), config_(config), name_(std::move(name)) {
    if (net_.input_size() != observation_size(config_)) {
        throw Error("network expects " + std::to_string(net_.input_size()) + " inputs but the environment provides " +
                    std::to_string(observation_size(config_)));
    }
    if (net_.output_size() != static_cast<int>(config_.actions.size())) {
        throw Error("network has " + std::to_string(net_.output_size()) + " outputs but the action set has " +
                    std::to_string(config_.actions.size()));
    }
}

int NetworkPolicy::act(const Observation& obs) {
    const Eigen::VectorXd out = net_.forward(encode_observation(obs, config_));
    Eigen::Index best = 0;
    out.maxCoeff(&best);
    return static_cast<int>(best);
}

int RandomPolicy::act(const Observation&) {
    return std::uniform_int_distribution<int>(0, action_count_ - 1)(rng_);
}

std::vector<double> moving_average(const std::vector<double>& xs, std::size_t window) {
    window = std::max<std::size_t>(1, window);
    std::vector<double> out;
    out.reserve(xs.size());
    double sum = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sum += xs[i];
        if (i >= window) sum -= xs[i - window];
        out.push_back(sum / static_cast<double>(std::min(i + 1, window)));
    }
    return out;
}

void write_train_report_csv(std::ostream& out, const TrainReport& report) {
    out << "episode,reward,moving_average\n";
    for (std::size_t i = 0; i < report.episode_rewards.size(); ++i) {
        out << i << ',' << format_double(report.episode_rewards[i]) << ',' << format_double(report.moving_average[i])
            << '\n';
    }
}

}  // namespace biosim
