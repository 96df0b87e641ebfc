#include "biosim/agents.hpp"

#include <cmath>
#include <exception>

#include "biosim/error.hpp"

namespace biosim {

namespace {

EpisodeTrace run_one(const Policy& prototype, const EnvConfig& config, std::uint64_t seed) {
    Environment env(config);
    auto policy = prototype.clone();
    env.reset(seed);
    return run_episode(env, *policy);
}

}  // namespace

std::vector<EpisodeTrace> collect_traces(const Policy& policy, const EnvConfig& config, int n_episodes,
                                         std::uint64_t seed, Backend backend) {
    if (n_episodes < 1) throw Error("evaluation needs at least one episode");
    config.validate();
    std::vector<EpisodeTrace> traces(static_cast<std::size_t>(n_episodes));
    if (backend == Backend::Serial) {
        for (int i = 0; i < n_episodes; ++i) traces[i] = run_one(policy, config, derive_seed(seed, i));
        return traces;
    }
    std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic)
    for (int i = 0; i < n_episodes; ++i) {
        try {
            traces[i] = run_one(policy, config, derive_seed(seed, i));
        } catch (...) {
#pragma omp critical
            if (!failure) failure = std::current_exception();
        }
    }
    if (failure) std::rethrow_exception(failure);
    return traces;
}

EvalStats summarize(const std::vector<EpisodeTrace>& traces) {
    EvalStats s;
    s.episodes = static_cast<int>(traces.size());
    if (traces.empty()) return s;
    for (const auto& t : traces) {
        s.rewards.push_back(t.total_reward);
        s.loss_percents.push_back(100.0 * t.loss_fraction);
        s.mean_reward += t.total_reward;
        s.mean_loss_percent += 100.0 * t.loss_fraction;
        s.mean_pesticide_cost += t.pesticide_cost;
        s.mean_percent_sprayed += t.percent_sprayed;
    }
    const double n = static_cast<double>(traces.size());
    s.mean_reward /= n;
    s.mean_loss_percent /= n;
    s.mean_pesticide_cost /= n;
    s.mean_percent_sprayed /= n;
    double var = 0.0;
    for (double r : s.rewards) var += (r - s.mean_reward) * (r - s.mean_reward);
    s.std_reward = traces.size() > 1 ? std::sqrt(var / (n - 1.0)) : 0.0;
    return s;
}

EvalStats evaluate(const Policy& policy, const EnvConfig& config, int n_episodes, std::uint64_t seed,
                   Backend backend) {
    return summarize(collect_traces(policy, config, n_episodes, seed, backend));
}

}  // namespace biosim
