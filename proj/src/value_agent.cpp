#include <chrono>
#include <cmath>

#include <spdlog/spdlog.h>

#include "biosim/agents.hpp"
#include "biosim/error.hpp"

namespace biosim {

void ValueAgentConfig::validate() const {
    if (!(gamma > 0.0 && gamma <= 1.0)) throw Error("gamma must lie in (0,1]");
    if (update_interval < 1 || target_update_interval < 1) throw Error("update intervals must be at least 1");
    if (!(epsilon_start >= 0.0 && epsilon_start <= 1.0 && epsilon_end >= 0.0 && epsilon_end <= 1.0)) {
        throw Error("epsilon values must lie in [0,1]");
    }
    if (replay_capacity < 1 || minibatch_size < 1) throw Error("replay capacity and minibatch size must be positive");
    if (!(learning_rate > 0.0)) throw Error("learning rate must be positive");
    for (int h : hidden) {
        if (h < 1) throw Error("hidden layer sizes must be positive");
    }
}

double ValueAgentConfig::epsilon_at(std::size_t step) const {
    if (epsilon_decay_steps == 0 || step >= epsilon_decay_steps) return epsilon_end;
    const double f = static_cast<double>(step) / static_cast<double>(epsilon_decay_steps);
    return epsilon_start + f * (epsilon_end - epsilon_start);
}

ReplayBuffer::ReplayBuffer(std::size_t capacity, int obs_size)
    : capacity_(capacity),
      obs_size_(obs_size),
      obs_(obs_size, static_cast<Eigen::Index>(capacity)),
      next_obs_(obs_size, static_cast<Eigen::Index>(capacity)),
      actions_(capacity),
      rewards_(capacity),
      dones_(capacity) {
    if (capacity == 0) throw Error("replay capacity must be positive");
}

void ReplayBuffer::push(const Eigen::VectorXd& obs, int action, double reward, const Eigen::VectorXd& next_obs,
                        bool done) {
    const auto col = static_cast<Eigen::Index>(head_);
    obs_.col(col) = obs.cast<float>();
    next_obs_.col(col) = next_obs.cast<float>();
    actions_[head_] = action;
    rewards_[head_] = reward;
    dones_[head_] = done ? 1 : 0;
    head_ = (head_ + 1) % capacity_;
    size_ = std::min(size_ + 1, capacity_);
}

std::vector<std::size_t> ReplayBuffer::sample_indices(std::size_t n, Rng& rng) const {
    if (size_ == 0) throw Error("cannot sample from an empty replay buffer");
    std::uniform_int_distribution<std::size_t> dist(0, size_ - 1);
    std::vector<std::size_t> idx(n);
    for (auto& i : idx) i = dist(rng);
    return idx;
}

Transition ReplayBuffer::get(std::size_t i) const {
    const auto col = static_cast<Eigen::Index>(i);
    return {obs_.col(col), actions_[i], rewards_[i], next_obs_.col(col), dones_[i] != 0};
}

ReplayBuffer::Batch ReplayBuffer::gather(const std::vector<std::size_t>& indices) const {
    const auto n = static_cast<Eigen::Index>(indices.size());
    Batch b{Eigen::MatrixXd(obs_size_, n), Eigen::MatrixXd(obs_size_, n), std::vector<int>(indices.size()),
            Eigen::VectorXd(n), Eigen::VectorXd(n)};
    for (Eigen::Index k = 0; k < n; ++k) {
        const auto i = indices[static_cast<std::size_t>(k)];
        const auto col = static_cast<Eigen::Index>(i);
        b.obs.col(k) = obs_.col(col).cast<double>();
        b.next_obs.col(k) = next_obs_.col(col).cast<double>();
        b.actions[static_cast<std::size_t>(k)] = actions_[i];
        b.rewards(k) = rewards_[i];
        b.dones(k) = dones_[i];
    }
    return b;
}

Eigen::VectorXd double_q_targets(const nn::Mlp& online, const nn::Mlp& target, const Eigen::MatrixXd& next_obs,
                                 const Eigen::VectorXd& rewards, const Eigen::VectorXd& dones, double gamma) {
    const Eigen::MatrixXd q_online = online.forward(next_obs);
    const Eigen::MatrixXd q_target = target.forward(next_obs);
    Eigen::VectorXd y(rewards.size());
    for (Eigen::Index k = 0; k < rewards.size(); ++k) {
        Eigen::Index best = 0;
        q_online.col(k).maxCoeff(&best);
        y(k) = rewards(k) + gamma * (1.0 - dones(k)) * q_target(best, k);
    }
    return y;
}

namespace {

// One Huber-loss gradient step; returns the mean loss.
double q_update(nn::Mlp& online, const nn::Mlp& target, nn::Adam& opt, const ReplayBuffer::Batch& b,
                const ValueAgentConfig& cfg) {
    const Eigen::VectorXd y = double_q_targets(online, target, b.next_obs, b.rewards, b.dones, cfg.gamma);
    nn::Mlp::Cache cache;
    const Eigen::MatrixXd q = online.forward(b.obs, cache);
    Eigen::MatrixXd d_out = Eigen::MatrixXd::Zero(q.rows(), q.cols());
    const double n = static_cast<double>(q.cols());
    double loss = 0.0;
    for (Eigen::Index k = 0; k < q.cols(); ++k) {
        const double err = q(b.actions[static_cast<std::size_t>(k)], k) - y(k);
        const double a = std::abs(err);
        loss += a <= 1.0 ? 0.5 * err * err : a - 0.5;
        d_out(b.actions[static_cast<std::size_t>(k)], k) = (a <= 1.0 ? err : (err > 0 ? 1.0 : -1.0)) / n;
    }
    loss /= n;
    if (!std::isfinite(loss)) throw Error("value agent diverged: non-finite loss");
    auto grads = online.backward(cache, d_out);
    nn::clip_grad_norm(grads, cfg.max_grad_norm);
    opt.step(online, grads);
    return loss;
}

std::vector<int> layer_sizes(int in, const std::vector<int>& hidden, int out) {
    std::vector<int> sizes{in};
    sizes.insert(sizes.end(), hidden.begin(), hidden.end());
    sizes.push_back(out);
    return sizes;
}

}  // namespace

TrainedAgent train_value_agent(const EnvConfig& env_config, const ValueAgentConfig& config, std::uint64_t seed,
                               int episodes) {
    config.validate();
    if (episodes < 0) throw Error("episode count must be non-negative");
    const auto start = std::chrono::steady_clock::now();

    Environment env(env_config);
    const int obs_size = observation_size(env_config);
    const int n_actions = env.action_count();
    Rng rng(derive_seed(seed, 0xA6E7));
    nn::Mlp online(layer_sizes(obs_size, config.hidden, n_actions), rng);
    nn::Mlp target = online;
    nn::Adam opt(online, config.learning_rate);
    ReplayBuffer buffer(config.replay_capacity, obs_size);

    TrainReport report;
    report.seed = seed;
    std::size_t steps = 0;
    Eigen::VectorXd obs_vec(obs_size), next_vec(obs_size);
    for (int ep = 0; ep < episodes; ++ep) {
        Observation obs = env.reset(derive_seed(seed, static_cast<std::uint64_t>(ep)));
        encode_observation_into(obs, env_config, obs_vec);
        double ep_reward = 0.0;
        while (!env.done()) {
            int action = 0;
            if (uniform01(rng) < config.epsilon_at(steps)) {
                action = std::uniform_int_distribution<int>(0, n_actions - 1)(rng);
            } else {
                Eigen::Index best = 0;
                online.forward(obs_vec).col(0).maxCoeff(&best);
                action = static_cast<int>(best);
            }
            StepResult r = env.step(action);
            ep_reward += r.reward;
            encode_observation_into(r.observation, env_config, next_vec);
            buffer.push(obs_vec, action, r.reward * config.reward_scale, next_vec, r.done);
            obs_vec.swap(next_vec);
            ++steps;
            if (buffer.size() >= config.replay_start_size && steps % config.update_interval == 0) {
                const auto batch = buffer.gather(buffer.sample_indices(config.minibatch_size, rng));
                q_update(online, target, opt, batch, config);
            }
            if (steps % config.target_update_interval == 0) target = online;
        }
        report.episode_rewards.push_back(ep_reward);
        if ((ep + 1) % 500 == 0) {
            spdlog::info("value agent: episode {} / {}, mean reward (last 100) {:.3f}, epsilon {:.3f}", ep + 1,
                         episodes, moving_average(report.episode_rewards, 100).back(), config.epsilon_at(steps));
        }
    }
    if (!online.all_finite()) throw Error("value agent diverged: non-finite weights");
    report.moving_average = moving_average(report.episode_rewards, config.moving_average_window);
    report.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (config.eval_episodes > 0) {
        NetworkPolicy greedy(online, env_config, "value");
        report.final_eval = evaluate(greedy, env_config, config.eval_episodes, derive_seed(seed, 0xE7A1));
    }
    return {std::move(online), std::move(report)};
}

}  // namespace biosim
