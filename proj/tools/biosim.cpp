#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <set>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>
#include <spdlog/spdlog.h>

#include "biosim/agents.hpp"
#include "biosim/analysis.hpp"
#include "biosim/config_io.hpp"
#include "biosim/error.hpp"
#include "biosim/log.hpp"
#include "biosim/rng.hpp"
#include "biosim/trace_io.hpp"

namespace fs = std::filesystem;
using namespace biosim;

namespace {

struct Loaded {
    RawConfig raw;
    BuiltConfig built;
};

Loaded load(const std::string& path) {
    Loaded out;
    fs::path base;
    if (path.empty()) {
        out.raw = parse_config(default_config_text(), "<default>");
    } else {
        out.raw = load_config_file(path);
        base = fs::path(path).parent_path();
    }
    out.built = build_env_config(out.raw, base);
    for (const auto& w : out.built.warnings) spdlog::warn("{}", w);
    return out;
}

nlohmann::ordered_json stats_json(const EvalStats& s) {
    return {{"episodes", s.episodes},
            {"mean_reward", s.mean_reward},
            {"std_reward", s.std_reward},
            {"mean_loss_percent", s.mean_loss_percent},
            {"mean_pesticide_cost", s.mean_pesticide_cost},
            {"mean_percent_sprayed", s.mean_percent_sprayed}};
}

std::ofstream open_out(const fs::path& p, std::ios::openmode mode = std::ios::out) {
    std::ofstream out(p, mode);
    if (!out) throw Error("cannot write " + p.string());
    return out;
}

struct TrainArgs {
    std::string config, agent = "value", out = "model_out";
    int episodes = 5000;
    std::uint64_t seed = 1;
};

void run_train(const TrainArgs& a) {
    const Loaded cfg = load(a.config);
    TrainedAgent trained = a.agent == "value"
                               ? train_value_agent(cfg.built.env, cfg.built.value_agent, a.seed, a.episodes)
                               : train_pg_agent(cfg.built.env, cfg.built.pg_agent, a.seed, a.episodes);
    fs::create_directories(a.out);
    nn::save_weights_file((fs::path(a.out) / "model.bin").string(), trained.network);
    auto report = open_out(fs::path(a.out) / "train_report.csv");
    write_train_report_csv(report, trained.report);
    const nlohmann::ordered_json summary{{"agent", a.agent},
                                         {"episodes", a.episodes},
                                         {"seed", a.seed},
                                         {"config_fingerprint", config_fingerprint(cfg.raw)},
                                         {"wall_seconds", trained.report.wall_seconds},
                                         {"final_eval", stats_json(trained.report.final_eval)}};
    open_out(fs::path(a.out) / "train_summary.json") << summary.dump(2) << '\n';
    std::cout << summary.dump(2) << '\n';
}

struct EvalArgs {
    std::string config, policy = "nospray", out = "traces", label;
    int episodes = 200;
    std::uint64_t seed = 1;
    std::optional<int> spray_day, grade, threshold;
    std::vector<int> snapshot_days;
    bool write_traces = true;
};

std::unique_ptr<Policy> make_policy(const EvalArgs& a, const BuiltConfig& b) {
    if (a.policy == "nospray") return std::make_unique<NoSprayPolicy>();
    if (a.policy == "schedule") {
        return std::make_unique<SchedulePolicy>(a.spray_day.value_or(b.policy.schedule_day),
                                                a.grade.value_or(b.policy.schedule_grade));
    }
    if (a.policy == "reactive") {
        return std::make_unique<ReactivePolicy>(a.threshold.value_or(b.policy.reactive_threshold),
                                                a.grade.value_or(b.policy.reactive_grade));
    }
    return std::make_unique<NetworkPolicy>(nn::load_weights_file(a.policy), b.env,
                                           fs::path(a.policy).parent_path().filename().string());
}

void write_snapshots(const Policy& policy, const EnvConfig& config, std::uint64_t seed, const std::vector<int>& days,
                     const fs::path& dir) {
    const std::set<int> wanted(days.begin(), days.end());
    Environment env(config);
    env.reset(derive_seed(seed, 0));
    auto p = policy.clone();
    run_episode(env, *p, [&](const Environment& e, const StepResult&) {
        const int day = e.day() - 1;
        if (!wanted.count(day)) return;
        char name[32];
        std::snprintf(name, sizeof name, "health_day%03d.ppm", day);
        auto out = open_out(dir / name, std::ios::binary);
        write_health_ppm(out, e.field());
    });
}

void run_eval(const EvalArgs& a) {
    const Loaded cfg = load(a.config);
    const EnvConfig& env = cfg.built.env;
    const auto policy = make_policy(a, cfg.built);
    const std::string label = a.label.empty() ? policy->name() : a.label;
    const fs::path dir = fs::path(a.out) / label;
    fs::create_directories(dir);

    const auto traces = collect_traces(*policy, env, a.episodes, a.seed);
    std::vector<EpisodeSummary> summaries;
    for (std::size_t i = 0; i < traces.size(); ++i) {
        summaries.push_back(summarize_episode(traces[i]));
        if (!a.write_traces) continue;
        char stem[32];
        std::snprintf(stem, sizeof stem, "episode_%04zu", i);
        auto csv = open_out(dir / (std::string(stem) + ".csv"));
        write_trace_csv(csv, traces[i]);
        auto jsonl = open_out(dir / (std::string(stem) + ".jsonl"));
        write_trace_jsonl(jsonl, traces[i]);
    }
    write_regime(dir.string(),
                 {label, config_fingerprint(cfg.raw), report_economics(env), a.seed,
                  static_cast<std::size_t>(a.episodes)},
                 summaries);
    if (!a.snapshot_days.empty()) write_snapshots(*policy, env, a.seed, a.snapshot_days, dir);

    const EvalStats stats = summarize(traces);
    nlohmann::ordered_json summary{{"label", label}, {"policy", policy->name()}, {"seed", a.seed}};
    summary.update(stats_json(stats));
    open_out(dir / "summary.json") << summary.dump(2) << '\n';
    std::cout << summary.dump(2) << '\n';
}

void run_report(const std::string& traces, const std::string& out_path) {
    const LoadedReport loaded = load_regimes(traces);
    const auto rows = management_report(loaded.regimes, loaded.econ);
    if (out_path.empty() || out_path == "-") {
        write_report_csv(std::cout, rows);
    } else {
        auto out = open_out(out_path);
        write_report_csv(out, rows);
    }
}

}  // namespace

int main(int argc, char** argv) {
    init_logging();
    CLI::App app{"Crop disease spread simulator and spray-policy trainer"};
    app.require_subcommand(1);

    TrainArgs train;
    auto* t = app.add_subcommand("train", "Train a value-based or policy-gradient agent");
    t->add_option("--config", train.config, "INI configuration (built-in defaults when omitted)")->check(CLI::ExistingFile);
    t->add_option("--agent", train.agent, "value | pg")->check(CLI::IsMember({"value", "pg"}));
    t->add_option("--episodes", train.episodes, "Training episodes")->check(CLI::PositiveNumber);
    t->add_option("--seed", train.seed, "Base seed");
    t->add_option("--out", train.out, "Output directory (model.bin, train_report.csv)");

    EvalArgs eval;
    auto* e = app.add_subcommand("eval", "Evaluate a policy and write per-episode traces");
    e->add_option("--config", eval.config, "INI configuration (built-in defaults when omitted)")->check(CLI::ExistingFile);
    e->add_option("--policy", eval.policy, "nospray | schedule | reactive | path to model.bin");
    e->add_option("--label", eval.label, "Regime name (defaults to the policy name)");
    e->add_option("--episodes", eval.episodes, "Evaluation episodes")->check(CLI::PositiveNumber);
    e->add_option("--seed", eval.seed, "Base seed");
    e->add_option("--out", eval.out, "Trace root; output goes to OUT/<label>/");
    e->add_option("--spray-day", eval.spray_day, "Schedule policy spray day");
    e->add_option("--grade", eval.grade, "Action index used by schedule/reactive policies");
    e->add_option("--threshold", eval.threshold, "Reactive policy infected-cell threshold");
    e->add_option("--snapshot-days", eval.snapshot_days, "Days of episode 0 to render as PPM");
    e->add_flag("!--no-traces", eval.write_traces, "Skip per-episode CSV/JSONL files");

    std::string report_dir, report_out;
    auto* r = app.add_subcommand("report", "Tabulate evaluated regimes as a management comparison CSV");
    r->add_option("--traces", report_dir, "Trace root written by eval")->required();
    r->add_option("--out", report_out, "CSV path ('-' for stdout)");

    CLI11_PARSE(app, argc, argv);
    try {
        if (*t) run_train(train);
        if (*e) run_eval(eval);
        if (*r) run_report(report_dir, report_out);
    } catch (const ConfigError& ex) {
        std::cerr << "configuration error:\n" << ex.what() << '\n';
        return 2;
    } catch (const std::exception& ex) {
        std::cerr << "error: " << ex.what() << '\n';
        return 1;
    }
    return 0;
}
