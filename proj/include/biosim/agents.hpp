#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "biosim/env.hpp"
#include "biosim/nn.hpp"

namespace biosim {

// ---- observation encoding -------------------------------------------------

/// Health codes scaled to [0,1] (code / 2) in row-major order, then day / season_length
/// when `include_day` is set.
int observation_size(const EnvConfig& config);
Eigen::VectorXd encode_observation(const Observation& obs, const EnvConfig& config);
void encode_observation_into(const Observation& obs, const EnvConfig& config, Eigen::Ref<Eigen::VectorXd> out);

// ---- baselines ------------------------------------------------------------

class NoSprayPolicy final : public Policy {
public:
    int act(const Observation&) override { return 0; }
    std::unique_ptr<Policy> clone() const override { return std::make_unique<NoSprayPolicy>(*this); }
    std::string name() const override { return "nospray"; }
};

/// Whole-field application of `grade` on `spray_day`; no spray otherwise.
class SchedulePolicy final : public Policy {
public:
    SchedulePolicy(int spray_day, int grade);
    int act(const Observation& obs) override { return obs.day == spray_day_ ? grade_ : 0; }
    SprayMode spray_mode() const override { return SprayMode::WholeField; }
    std::unique_ptr<Policy> clone() const override { return std::make_unique<SchedulePolicy>(*this); }
    std::string name() const override { return "schedule"; }

private:
    int spray_day_;
    int grade_;
};

/// Sprays `grade` on infected cells whenever the observed infected count reaches `threshold`.
class ReactivePolicy final : public Policy {
public:
    ReactivePolicy(int threshold, int grade);
    int act(const Observation& obs) override;
    std::unique_ptr<Policy> clone() const override { return std::make_unique<ReactivePolicy>(*this); }
    std::string name() const override { return "reactive"; }

private:
    int threshold_;
    int grade_;
};

/// Greedy policy over a network's outputs (Q-values or action logits).
class NetworkPolicy final : public Policy {
public:
    NetworkPolicy(nn::Mlp net, const EnvConfig& config, std::string name = "network");
    int act(const Observation& obs) override;
    std::unique_ptr<Policy> clone() const override { return std::make_unique<NetworkPolicy>(*this); }
    std::string name() const override { return name_; }
    const nn::Mlp& network() const { return net_; }

private:
    nn::Mlp net_;
    EnvConfig config_;
    std::string name_;
};

/// Uniformly random actions; used for bookkeeping properties and exploration tests.
class RandomPolicy final : public Policy {
public:
    RandomPolicy(int action_count, std::uint64_t seed) : action_count_(action_count), rng_(seed) {}
    int act(const Observation&) override;
    std::unique_ptr<Policy> clone() const override { return std::make_unique<RandomPolicy>(*this); }
    std::string name() const override { return "random"; }

private:
    int action_count_;
    Rng rng_;
};

// ---- evaluation -------------------------------------------------------------

struct EvalStats {
    int episodes = 0;
    double mean_reward = 0.0;
    double std_reward = 0.0;
    double mean_loss_percent = 0.0;
    double mean_pesticide_cost = 0.0;
    double mean_percent_sprayed = 0.0;
    std::vector<double> rewards;
    std::vector<double> loss_percents;
};

/// Episode i runs with seed derive_seed(seed, i) on its own environment and policy clone.
std::vector<EpisodeTrace> collect_traces(const Policy& policy, const EnvConfig& config, int n_episodes,
                                         std::uint64_t seed, Backend backend = Backend::OpenMP);
EvalStats summarize(const std::vector<EpisodeTrace>& traces);
EvalStats evaluate(const Policy& policy, const EnvConfig& config, int n_episodes, std::uint64_t seed,
                   Backend backend = Backend::OpenMP);

// ---- training -------------------------------------------------------------------

struct TrainReport {
    std::vector<double> episode_rewards;
    std::vector<double> moving_average;
    EvalStats final_eval;
    double wall_seconds = 0.0;
    std::uint64_t seed = 0;
};

/// Trailing mean over at most `window` values.
std::vector<double> moving_average(const std::vector<double>& xs, std::size_t window);
void write_train_report_csv(std::ostream& out, const TrainReport& report);

struct ValueAgentConfig {
    std::vector<int> hidden{64, 64};
    double learning_rate = 5e-4;
    double gamma = 0.99;
    std::size_t replay_capacity = 100000;
    std::size_t replay_start_size = 5000;
    std::size_t minibatch_size = 32;
    std::size_t update_interval = 130;
    std::size_t target_update_interval = 1300;
    double epsilon_start = 1.0;
    double epsilon_end = 0.05;
    std::size_t epsilon_decay_steps = 50000;
    double reward_scale = 1.0;
    double max_grad_norm = 10.0;
    int eval_episodes = 200;
    std::size_t moving_average_window = 100;

    void validate() const;
    double epsilon_at(std::size_t step) const;
};

struct Transition {
    Eigen::VectorXf obs;
    int action = 0;
    double reward = 0.0;
    Eigen::VectorXf next_obs;
    bool done = false;
};

/// Fixed-capacity ring buffer with uniform sampling (with replacement).
class ReplayBuffer {
public:
    ReplayBuffer(std::size_t capacity, int obs_size);

    void push(const Eigen::VectorXd& obs, int action, double reward, const Eigen::VectorXd& next_obs, bool done);
    std::size_t size() const { return size_; }
    std::size_t capacity() const { return capacity_; }
    std::vector<std::size_t> sample_indices(std::size_t n, Rng& rng) const;
    Transition get(std::size_t i) const;

    struct Batch {
        Eigen::MatrixXd obs, next_obs;  // obs_size x n
        std::vector<int> actions;
        Eigen::VectorXd rewards;
        Eigen::VectorXd dones;
    };
    Batch gather(const std::vector<std::size_t>& indices) const;

private:
    std::size_t capacity_;
    int obs_size_;
    std::size_t size_ = 0;
    std::size_t head_ = 0;
    Eigen::MatrixXf obs_, next_obs_;
    std::vector<int> actions_;
    std::vector<double> rewards_;
    std::vector<std::uint8_t> dones_;
};

/// r + gamma * (1 - done) * Q_target(s', argmax_a Q_online(s', a)).
Eigen::VectorXd double_q_targets(const nn::Mlp& online, const nn::Mlp& target, const Eigen::MatrixXd& next_obs,
                                 const Eigen::VectorXd& rewards, const Eigen::VectorXd& dones, double gamma);

struct TrainedAgent {
    nn::Mlp network;
    TrainReport report;
};

TrainedAgent train_value_agent(const EnvConfig& env_config, const ValueAgentConfig& config, std::uint64_t seed,
                               int episodes);

struct PolicyGradientConfig {
    std::vector<int> hidden{64, 64};
    double learning_rate = 0.00075;
    std::size_t rollout_length = 4000;
    std::size_t minibatch_size = 2250;
    int epochs = 40;
    double clip = 0.284;
    double entropy_coef = 0.182;
    double gamma = 0.995;
    double gae_lambda = 0.95;
    double reward_scale = 1.0;
    double max_grad_norm = 0.5;
    int eval_episodes = 200;
    std::size_t moving_average_window = 100;

    void validate() const;
};

struct PpoBatch {
    Eigen::MatrixXd obs;  // obs_size x n
    std::vector<int> actions;
    Eigen::VectorXd old_log_probs;
    Eigen::VectorXd advantages;
};

struct PpoStats {
    double loss = 0.0;
    double mean_entropy = 0.0;
    double max_clipped_ratio_excess = 0.0;  // how far a clamped ratio strayed outside [1-eps, 1+eps]
};

/// One clipped-surrogate gradient step on the policy network.
PpoStats ppo_policy_update(nn::Mlp& policy, nn::RmsProp& optimizer, const PpoBatch& batch,
                           const PolicyGradientConfig& config);

/// Softmax over each column of logits.
Eigen::MatrixXd softmax_columns(const Eigen::MatrixXd& logits);

TrainedAgent train_pg_agent(const EnvConfig& env_config, const PolicyGradientConfig& config, std::uint64_t seed,
                            int episodes);

}  // namespace biosim
