#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>

#include <spdlog/spdlog.h>

#include "biosim/agents.hpp"
#include "biosim/error.hpp"

namespace biosim {

void PolicyGradientConfig::validate() const {
    if (!(clip > 0.0)) throw Error("clip parameter must be positive");
    if (epochs < 1) throw Error("epochs must be at least 1");
    if (rollout_length < 1 || minibatch_size < 1) throw Error("rollout length and minibatch size must be positive");
    if (minibatch_size > rollout_length) throw Error("minibatch size must not exceed the rollout length");
    if (!(gamma > 0.0 && gamma <= 1.0)) throw Error("gamma must lie in (0,1]");
    if (!(gae_lambda >= 0.0 && gae_lambda <= 1.0)) throw Error("advantage lambda must lie in [0,1]");
    if (!(learning_rate > 0.0)) throw Error("learning rate must be positive");
    if (!(entropy_coef >= 0.0)) throw Error("entropy coefficient must be non-negative");
    for (int h : hidden) {
        if (h < 1) throw Error("hidden layer sizes must be positive");
    }
}

Eigen::MatrixXd softmax_columns(const Eigen::MatrixXd& logits) {
    Eigen::MatrixXd p(logits.rows(), logits.cols());
    for (Eigen::Index k = 0; k < logits.cols(); ++k) {
        const Eigen::VectorXd e = (logits.col(k).array() - logits.col(k).maxCoeff()).exp();
        p.col(k) = e / e.sum();
    }
    return p;
}

PpoStats ppo_policy_update(nn::Mlp& policy, nn::RmsProp& optimizer, const PpoBatch& batch,
                           const PolicyGradientConfig& config) {
    nn::Mlp::Cache cache;
    const Eigen::MatrixXd logits = policy.forward(batch.obs, cache);
    const Eigen::MatrixXd probs = softmax_columns(logits);
    const Eigen::Index n = logits.cols();
    const double inv_n = 1.0 / static_cast<double>(n);
    const double lo = 1.0 - config.clip;
    const double hi = 1.0 + config.clip;

    PpoStats stats;
    Eigen::MatrixXd d_logits(logits.rows(), n);
    for (Eigen::Index k = 0; k < n; ++k) {
        const int a = batch.actions[static_cast<std::size_t>(k)];
        const double adv = batch.advantages(k);
        const Eigen::VectorXd p = probs.col(k);
        const Eigen::VectorXd logp = (p.array().max(1e-300)).log();
        const double ratio = std::exp(logp(a) - batch.old_log_probs(k));
        const double clamped = std::clamp(ratio, lo, hi);
        stats.max_clipped_ratio_excess =
            std::max({stats.max_clipped_ratio_excess, clamped - hi, lo - clamped});
        const double surr1 = ratio * adv;
        const double surr2 = clamped * adv;
        const double entropy = -(p.array() * logp.array()).sum();
        stats.loss -= (std::min(surr1, surr2) + config.entropy_coef * entropy) * inv_n;
        stats.mean_entropy += entropy * inv_n;

        // d(min(surr1, surr2)) / d logp(a): the clipped branch has no gradient outside the band.
        const double g = (surr1 <= surr2 || (ratio >= lo && ratio <= hi)) ? ratio * adv : 0.0;
        for (Eigen::Index j = 0; j < logits.rows(); ++j) {
            const double d_logp = (j == a ? 1.0 : 0.0) - p(j);
            const double d_entropy = -p(j) * (logp(j) + entropy);
            d_logits(j, k) = -(g * d_logp + config.entropy_coef * d_entropy) * inv_n;
        }
    }
    if (!std::isfinite(stats.loss)) throw Error("policy-gradient agent diverged: non-finite loss");
    auto grads = policy.backward(cache, d_logits);
    nn::clip_grad_norm(grads, config.max_grad_norm);
    optimizer.step(policy, grads);
    return stats;
}

namespace {

double value_update(nn::Mlp& value, nn::RmsProp& optimizer, const Eigen::MatrixXd& obs, const Eigen::VectorXd& returns,
                    double max_grad_norm) {
    nn::Mlp::Cache cache;
    const Eigen::MatrixXd v = value.forward(obs, cache);
    const Eigen::RowVectorXd err = v.row(0) - returns.transpose();
    const double n = static_cast<double>(obs.cols());
    const double loss = 0.5 * err.squaredNorm() / n;
    if (!std::isfinite(loss)) throw Error("policy-gradient agent diverged: non-finite value loss");
    auto grads = value.backward(cache, err / n);
    nn::clip_grad_norm(grads, max_grad_norm);
    optimizer.step(value, grads);
    return loss;
}

std::vector<int> layer_sizes(int in, const std::vector<int>& hidden, int out) {
    std::vector<int> sizes{in};
    sizes.insert(sizes.end(), hidden.begin(), hidden.end());
    sizes.push_back(out);
    return sizes;
}

int sample_action(const Eigen::VectorXd& p, Rng& rng) {
    const double u = uniform01(rng);
    double acc = 0.0;
    for (Eigen::Index j = 0; j < p.size(); ++j) {
        acc += p(j);
        if (u < acc) return static_cast<int>(j);
    }
    return static_cast<int>(p.size() - 1);
}

}  // namespace

TrainedAgent train_pg_agent(const EnvConfig& env_config, const PolicyGradientConfig& config, std::uint64_t seed,
                            int episodes) {
    config.validate();
    if (episodes < 0) throw Error("episode count must be non-negative");
    const auto start = std::chrono::steady_clock::now();

    Environment env(env_config);
    const int obs_size = observation_size(env_config);
    const int n_actions = env.action_count();
    Rng rng(derive_seed(seed, 0x9A6E));
    nn::Mlp policy(layer_sizes(obs_size, config.hidden, n_actions), rng);
    nn::Mlp value(layer_sizes(obs_size, config.hidden, 1), rng);
    nn::RmsProp policy_opt(policy, config.learning_rate);
    nn::RmsProp value_opt(value, config.learning_rate);

    TrainReport report;
    report.seed = seed;
    const std::size_t cap = config.rollout_length;
    Eigen::MatrixXd obs_buf(obs_size, static_cast<Eigen::Index>(cap));
    std::vector<int> actions(cap);
    Eigen::VectorXd rewards(cap), dones(cap), values(cap), log_probs(cap);

    int episodes_started = 0;
    double ep_reward = 0.0;
    Eigen::VectorXd obs_vec(obs_size);
    auto begin_episode = [&] {
        encode_observation_into(env.reset(derive_seed(seed, static_cast<std::uint64_t>(episodes_started))), env_config,
                                obs_vec);
        ++episodes_started;
        ep_reward = 0.0;
    };
    if (episodes > 0) begin_episode();

    std::vector<std::size_t> order;
    while (static_cast<int>(report.episode_rewards.size()) < episodes) {
        std::size_t len = 0;
        while (len < cap && static_cast<int>(report.episode_rewards.size()) < episodes) {
            const auto col = static_cast<Eigen::Index>(len);
            obs_buf.col(col) = obs_vec;
            const Eigen::VectorXd p = softmax_columns(policy.forward(obs_vec));
            const int a = sample_action(p, rng);
            values(col) = value.forward(obs_vec)(0, 0);
            log_probs(col) = std::log(std::max(p(a), 1e-300));
            actions[len] = a;
            StepResult r = env.step(a);
            ep_reward += r.reward;
            rewards(col) = r.reward * config.reward_scale;
            dones(col) = r.done ? 1.0 : 0.0;
            ++len;
            if (r.done) {
                report.episode_rewards.push_back(ep_reward);
                const auto done_count = report.episode_rewards.size();
                if (done_count % 500 == 0) {
                    spdlog::info("pg agent: episode {} / {}, mean reward (last 100) {:.3f}", done_count, episodes,
                                 moving_average(report.episode_rewards, 100).back());
                }
                if (static_cast<int>(done_count) < episodes) begin_episode();
            } else {
                encode_observation_into(r.observation, env_config, obs_vec);
            }
        }

        // Advantages with bootstrap from the state after the rollout if it was cut mid-episode.
        const auto n = static_cast<Eigen::Index>(len);
        const double tail_value = dones(n - 1) > 0.5 ? 0.0 : value.forward(obs_vec)(0, 0);
        Eigen::VectorXd adv(n);
        double gae = 0.0;
        for (Eigen::Index t = n - 1; t >= 0; --t) {
            const double next_v = dones(t) > 0.5 ? 0.0 : (t + 1 < n ? values(t + 1) : tail_value);
            const double delta = rewards(t) + config.gamma * next_v - values(t);
            gae = delta + config.gamma * config.gae_lambda * (1.0 - dones(t)) * gae;
            adv(t) = gae;
        }
        const Eigen::VectorXd returns = adv + values.head(n);
        const double mean = adv.mean();
        const double sd = std::sqrt((adv.array() - mean).square().sum() / static_cast<double>(n));
        Eigen::VectorXd norm_adv = sd > 1e-8 ? Eigen::VectorXd((adv.array() - mean) / sd) : Eigen::VectorXd(adv.array() - mean);

        order.resize(len);
        std::iota(order.begin(), order.end(), 0);
        const std::size_t mb = std::min(config.minibatch_size, len);
        for (int epoch = 0; epoch < config.epochs; ++epoch) {
            std::shuffle(order.begin(), order.end(), rng);
            for (std::size_t s = 0; s < len; s += mb) {
                const std::size_t e = std::min(len, s + mb);
                const auto m = static_cast<Eigen::Index>(e - s);
                PpoBatch batch{Eigen::MatrixXd(obs_size, m), std::vector<int>(e - s), Eigen::VectorXd(m), Eigen::VectorXd(m)};
                Eigen::VectorXd batch_returns(m);
                for (Eigen::Index k = 0; k < m; ++k) {
                    const auto i = static_cast<Eigen::Index>(order[s + static_cast<std::size_t>(k)]);
                    batch.obs.col(k) = obs_buf.col(i);
                    batch.actions[static_cast<std::size_t>(k)] = actions[static_cast<std::size_t>(i)];
                    batch.old_log_probs(k) = log_probs(i);
                    batch.advantages(k) = norm_adv(i);
                    batch_returns(k) = returns(i);
                }
                const PpoStats st = ppo_policy_update(policy, policy_opt, batch, config);
                if (st.max_clipped_ratio_excess > 1e-12) throw Error("clipped probability ratio escaped its band");
                value_update(value, value_opt, batch.obs, batch_returns, config.max_grad_norm);
            }
        }
    }
    if (!policy.all_finite() || !value.all_finite()) throw Error("policy-gradient agent diverged: non-finite weights");

    report.moving_average = moving_average(report.episode_rewards, config.moving_average_window);
    report.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (config.eval_episodes > 0) {
        NetworkPolicy greedy(policy, env_config, "pg");
        report.final_eval = evaluate(greedy, env_config, config.eval_episodes, derive_seed(seed, 0xE7A1));
    }
    return {std::move(policy), std::move(report)};
}

}  // namespace biosim
