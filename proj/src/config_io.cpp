#include "biosim/config_io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "biosim/csv.hpp"
#include "biosim/error.hpp"

namespace biosim {

bool RawConfig::has(const std::string& section, const std::string& key) const { return find(section, key) != nullptr; }

const std::string* RawConfig::find(const std::string& section, const std::string& key) const {
    const auto s = sections.find(section);
    if (s == sections.end()) return nullptr;
    const auto k = s->second.find(key);
    return k == s->second.end() ? nullptr : &k->second;
}

namespace {

bool valid_utf8(std::string_view s) {
    std::size_t i = 0;
    while (i < s.size()) {
        const auto c = static_cast<unsigned char>(s[i]);
        std::size_t len = 0;
        if (c < 0x80) len = 1;
        else if ((c >> 5) == 0x6) len = 2;
        else if ((c >> 4) == 0xE) len = 3;
        else if ((c >> 3) == 0x1E) len = 4;
        else return false;
        if (i + len > s.size()) return false;
        for (std::size_t k = 1; k < len; ++k) {
            if ((static_cast<unsigned char>(s[i + k]) >> 6) != 0x2) return false;
        }
        i += len;
    }
    return true;
}

std::string strip_comment(std::string_view line) {
    for (std::size_t i = 0; i < line.size(); ++i) {
        if ((line[i] == '#' || line[i] == ';') && (i == 0 || line[i - 1] == ' ' || line[i - 1] == '\t')) {
            return trim(line.substr(0, i));
        }
    }
    return trim(line);
}

}  // namespace

RawConfig parse_config(std::string_view text, const std::string& source) {
    RawConfig raw;
    std::string section;
    bool in_section = false;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const auto nl = text.find('\n', pos);
        const std::string_view line = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
        pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
        ++line_no;
        if (!valid_utf8(line)) throw ParseError(source, line_no, "invalid UTF-8");
        const std::string content = strip_comment(line);
        if (content.empty()) continue;
        if (content.front() == '[') {
            if (content.back() != ']' || content.size() < 3) throw ParseError(source, line_no, "malformed section header");
            section = trim(std::string_view(content).substr(1, content.size() - 2));
            if (section.empty() || section.find_first_of("[]") != std::string::npos) {
                throw ParseError(source, line_no, "malformed section header");
            }
            raw.sections[section];
            in_section = true;
            continue;
        }
        const auto eq = content.find('=');
        if (eq == std::string::npos) throw ParseError(source, line_no, "expected 'key = value'");
        const std::string key = trim(std::string_view(content).substr(0, eq));
        const std::string value = trim(std::string_view(content).substr(eq + 1));
        if (key.empty()) throw ParseError(source, line_no, "empty key");
        if (!in_section) throw ParseError(source, line_no, "key '" + key + "' appears before any section");
        auto& entries = raw.sections[section];
        if (entries.count(key)) throw ParseError(source, line_no, "duplicate key '" + key + "' in [" + section + "]");
        entries.emplace(key, value);
    }
    return raw;
}

RawConfig load_config_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError(path, 0, "cannot open file");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str(), path);
}

std::string serialize_config(const RawConfig& raw) {
    std::string out;
    for (const auto& [section, entries] : raw.sections) {
        if (!out.empty()) out += '\n';
        out += "[" + section + "]\n";
        for (const auto& [key, value] : entries) out += key + " = " + value + "\n";
    }
    return out;
}

std::vector<std::string> split_list(std::string_view value) {
    if (trim(value).empty()) return {};
    return split(value, ',');
}

std::vector<std::string> split_modules(std::string_view value) {
    if (trim(value).empty()) return {};
    return split(value, '+');
}

namespace {

const std::map<std::string, std::set<std::string>>& known_keys() {
    static const std::map<std::string, std::set<std::string>> keys{
        {"input_files", {"shape_file", "weather_file", "simulator_file", "severity_table_file", "manageable_shape_file"}},
        {"agent", {"action_type", "action", "state"}},
        {"env",
         {"reward", "total_length", "total_width", "crop_length", "crop_width", "multi_level_total_length",
          "multi_level_total_width", "multi_level_crop_length", "multi_level_crop_width", "n_seeds", "season_length",
          "stage_start_days", "onset_window"}},
        {"threat", {"s_high", "s_med", "s_low", "zone_radii", "lambda_reinfect", "lambda_spray", "t_degrade"}},
        {"yield", {"t_half", "y_min_by_stage", "severity"}},
        {"cost",
         {"attainable_yield_bushels_per_acre", "revenue_price_per_bushel", "pesticide_price_per_acre",
          "cell_area_acres", "action_cost_factors"}},
        {"policy", {"schedule_day", "schedule_grade", "reactive_threshold", "reactive_grade"}},
        {"value_agent",
         {"hidden", "learning_rate", "gamma", "replay_capacity", "replay_start_size", "minibatch_size",
          "update_interval", "target_update_interval", "epsilon_start", "epsilon_end", "epsilon_decay_steps",
          "reward_scale", "eval_episodes"}},
        {"pg_agent",
         {"hidden", "learning_rate", "rollout_length", "minibatch_size", "epochs", "clip", "entropy_coef", "gamma",
          "gae_lambda", "reward_scale", "eval_episodes"}},
    };
    return keys;
}

/// Typed access to RawConfig that records issues instead of throwing.
class Reader {
public:
    explicit Reader(const RawConfig& raw) : raw_(raw) {}

    std::vector<ConfigIssue> issues;

    void issue(const std::string& section, const std::string& key, const std::string& message) {
        issues.push_back({section, key, message});
    }

    const std::string* get(const std::string& section, const std::string& key, bool required) {
        const std::string* v = raw_.find(section, key);
        if (!v && required) {
            if (!raw_.sections.count(section)) {
                issue(section, key, "missing [" + section + "]");
            } else {
                issue(section, key, "required key is missing");
            }
        }
        return v;
    }

    std::optional<double> number(const std::string& section, const std::string& key, bool required = false) {
        const std::string* v = get(section, key, required);
        if (!v) return std::nullopt;
        auto d = to_double(*v);
        if (!d) issue(section, key, "expected a number, got '" + *v + "'");
        return d;
    }

    template <typename T>
    void read(const std::string& section, const std::string& key, T& target) {
        if (auto d = number(section, key)) {
            if constexpr (std::is_integral_v<T>) {
                if (*d != std::floor(*d) || (std::is_unsigned_v<T> && *d < 0)) {
                    issue(section, key, "expected a whole number");
                    return;
                }
            }
            target = static_cast<T>(*d);
        }
    }

    std::optional<std::vector<double>> numbers(const std::string& section, const std::string& key,
                                               std::size_t expected = 0) {
        const std::string* v = get(section, key, false);
        if (!v) return std::nullopt;
        std::vector<double> out;
        for (const auto& item : split_list(*v)) {
            auto d = to_double(item);
            if (!d) {
                issue(section, key, "expected a list of numbers, got '" + *v + "'");
                return std::nullopt;
            }
            out.push_back(*d);
        }
        if (expected && out.size() != expected) {
            issue(section, key, "expected " + std::to_string(expected) + " values, got " + std::to_string(out.size()));
            return std::nullopt;
        }
        return out;
    }

    static std::optional<double> to_double(std::string_view s) {
        double d = 0.0;
        const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), d);
        if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size() || !std::isfinite(d)) return std::nullopt;
        return d;
    }

private:
    const RawConfig& raw_;
};

bool is_placeholder(const std::string& v) { return v.empty() || v.find('*') != std::string::npos; }

std::string resolve(const std::filesystem::path& base, const std::string& p) {
    const std::filesystem::path path(p);
    return (path.is_relative() && !base.empty() ? base / path : path).string();
}

struct Frame {
    double min_x, min_y, max_x, max_y;
};

PolygonOutline map_to_canvas(const PolygonOutline& outline, const Frame& f, int rows, int cols) {
    PolygonOutline out;
    for (const auto& v : outline.vertices) {
        out.vertices.push_back({(v.x - f.min_x) * cols / (f.max_x - f.min_x), (v.y - f.min_y) * rows / (f.max_y - f.min_y)});
    }
    return out;
}

Frame bbox(const PolygonOutline& o) {
    Frame f{o.vertices.front().x, o.vertices.front().y, o.vertices.front().x, o.vertices.front().y};
    for (const auto& v : o.vertices) {
        f.min_x = std::min(f.min_x, v.x);
        f.max_x = std::max(f.max_x, v.x);
        f.min_y = std::min(f.min_y, v.y);
        f.max_y = std::max(f.max_y, v.y);
    }
    return f;
}

std::vector<std::string> grade_labels(std::size_t n) {
    if (n == 4) return {"NO", "LE", "ME", "HE"};
    std::vector<std::string> labels{"NO"};
    for (std::size_t i = 1; i < n; ++i) labels.push_back("G" + std::to_string(i));
    return labels;
}

}  // namespace

BuiltConfig build_env_config(const RawConfig& raw, const std::filesystem::path& base_dir) {
    Reader rd(raw);
    BuiltConfig out;
    EnvConfig& env = out.env;

    for (const auto& [section, entries] : raw.sections) {
        const auto known = known_keys().find(section);
        if (known == known_keys().end()) {
            out.warnings.push_back("unknown section [" + section + "]");
            continue;
        }
        for (const auto& [key, value] : entries) {
            if (!known->second.count(key)) out.warnings.push_back("unknown key [" + section + "] " + key);
        }
    }

    // [agent]
    if (const auto* t = rd.get("agent", "action_type", false); t && *t != "discrete") {
        rd.issue("agent", "action_type", "only 'discrete' actions are supported");
    }
    std::vector<double> efficacy{0.0, 0.3, 0.5, 0.9};
    if (auto v = rd.numbers("agent", "action")) {
        efficacy = *v;
        if (efficacy.empty()) rd.issue("agent", "action", "action list is empty");
    }
    std::sort(efficacy.begin(), efficacy.end());
    if (!efficacy.empty()) efficacy.front() = 0.0;
    std::vector<double> cost_factors;
    if (auto v = rd.numbers("cost", "action_cost_factors")) {
        cost_factors = *v;
    } else if (efficacy.size() == 4) {
        cost_factors = {0.0, 0.6, 0.8, 1.0};
    } else if (!efficacy.empty()) {
        rd.issue("cost", "action_cost_factors", "required when the action list does not have four entries");
    }
    if (!efficacy.empty() && !cost_factors.empty()) {
        if (cost_factors.size() != efficacy.size()) {
            rd.issue("cost", "action_cost_factors", "must have one entry per action");
        } else {
            env.actions.clear();
            const auto labels = grade_labels(efficacy.size());
            for (std::size_t i = 0; i < efficacy.size(); ++i) env.actions.push_back({labels[i], efficacy[i], cost_factors[i]});
            try {
                validate_grades(env.actions);
            } catch (const Error& e) {
                rd.issue("agent", "action", e.what());
            }
        }
    }
    out.state_terms = {"health", "day"};
    if (const auto* s = rd.get("agent", "state", false)) out.state_terms = split_modules(*s);
    {
        const bool has_health = std::count(out.state_terms.begin(), out.state_terms.end(), "health") > 0;
        for (const auto& t : out.state_terms) {
            if (t != "health" && t != "day") rd.issue("agent", "state", "unknown state module '" + t + "'");
        }
        if (!has_health) rd.issue("agent", "state", "the 'health' state module is required");
        env.observe_day = std::count(out.state_terms.begin(), out.state_terms.end(), "day") > 0;
    }

    // [env]
    if (!raw.sections.count("env")) {
        rd.issue("env", "", "missing [env]");
    }
    out.reward_terms = {"r1", "r2"};
    if (const auto* r = rd.get("env", "reward", false)) out.reward_terms = split_modules(*r);
    {
        bool has_r1 = false;
        for (const auto& t : out.reward_terms) {
            if (t == "r1") has_r1 = true;
            else if (t != "r2") rd.issue("env", "reward", "unknown reward module '" + t + "'");
        }
        if (!has_r1) rd.issue("env", "reward", "the yield term 'r1' is required");
        env.cost_in_reward = std::count(out.reward_terms.begin(), out.reward_terms.end(), "r2") > 0;
    }
    FieldSpec spec;
    bool spec_ok = raw.sections.count("env") > 0;
    auto dim = [&](const char* key, double& target) {
        if (!raw.sections.count("env")) return;
        if (auto d = rd.number("env", key, true)) {
            if (*d <= 0.0) {
                rd.issue("env", key, "must be positive");
                spec_ok = false;
            } else {
                target = *d;
            }
        } else {
            spec_ok = false;
        }
    };
    dim("total_length", spec.total_length);
    dim("total_width", spec.total_width);
    dim("crop_length", spec.crop_length);
    dim("crop_width", spec.crop_width);
    if (spec_ok && spec.crop_length > spec.total_length) {
        rd.issue("env", "crop_length", "must not exceed total_length");
        spec_ok = false;
    }
    if (spec_ok && spec.crop_width > spec.total_width) {
        rd.issue("env", "crop_width", "must not exceed total_width");
        spec_ok = false;
    }
    for (const char* key : {"multi_level_total_length", "multi_level_total_width", "multi_level_crop_length",
                            "multi_level_crop_width"}) {
        if (auto d = rd.number("env", key)) out.multi_level[key] = *d;
    }
    rd.read("env", "n_seeds", env.n_seeds);
    if (raw.has("env", "n_seeds") && env.n_seeds < 1) rd.issue("env", "n_seeds", "must be at least 1");
    rd.read("env", "season_length", env.calendar.season_length);
    if (auto v = rd.numbers("env", "stage_start_days", kReproductiveStages)) {
        for (int i = 0; i < kReproductiveStages; ++i) env.calendar.stage_start_days[i] = static_cast<int>((*v)[i]);
    }
    if (auto v = rd.numbers("env", "onset_window", 2)) {
        env.calendar.onset_first = static_cast<int>((*v)[0]);
        env.calendar.onset_last = static_cast<int>((*v)[1]);
    }
    try {
        env.calendar.validate();
    } catch (const Error& e) {
        rd.issue("env", "stage_start_days", e.what());
    }

    // [threat]
    rd.read("threat", "s_high", env.spread.s_high);
    rd.read("threat", "s_med", env.spread.s_med);
    rd.read("threat", "s_low", env.spread.s_low);
    if (auto v = rd.numbers("threat", "zone_radii", 3)) {
        for (int i = 0; i < 3; ++i) env.spread.zone_radii[i] = static_cast<int>((*v)[i]);
    }
    rd.read("threat", "lambda_reinfect", env.spread.lambda_reinfect);
    rd.read("threat", "lambda_spray", env.spread.lambda_spray);
    rd.read("threat", "t_degrade", env.spread.t_degrade);
    {
        const auto& s = env.spread;
        if (!(0.0 <= s.s_low && s.s_low <= s.s_med && s.s_med <= s.s_high && s.s_high <= 1.0)) {
            rd.issue("threat", "s_high", "spread probabilities must satisfy 0 <= s_low <= s_med <= s_high <= 1");
        }
        if (!(s.zone_radii[0] >= 1 && s.zone_radii[0] < s.zone_radii[1] && s.zone_radii[1] < s.zone_radii[2])) {
            rd.issue("threat", "zone_radii", "radii must be positive and strictly increasing");
        }
        if (!(s.lambda_reinfect > 0.0)) rd.issue("threat", "lambda_reinfect", "must be positive");
        if (!(s.lambda_reinfect < s.lambda_spray)) rd.issue("threat", "lambda_reinfect", "must be below lambda_spray");
        if (!(s.lambda_spray <= 1.0)) rd.issue("threat", "lambda_spray", "must not exceed 1");
        if (s.t_degrade < 1) rd.issue("threat", "t_degrade", "must be at least 1");
    }

    // [yield]
    rd.read("yield", "t_half", env.yield.t_half);
    if (!(env.yield.t_half > 0.0)) rd.issue("yield", "t_half", "must be positive");
    if (auto v = rd.numbers("yield", "y_min_by_stage", kReproductiveStages)) {
        for (int i = 0; i < kReproductiveStages; ++i) env.yield.y_min_by_stage[i] = (*v)[i];
        for (int i = 0; i < kReproductiveStages; ++i) {
            if (!((*v)[i] >= 0.0 && (*v)[i] < 1.0) || (i > 0 && (*v)[i] < (*v)[i - 1])) {
                rd.issue("yield", "y_min_by_stage", "values must lie in [0,1) and be non-decreasing");
                break;
            }
        }
    }
    double constant_severity = 1.0;
    rd.read("yield", "severity", constant_severity);
    if (!(constant_severity >= 0.0 && constant_severity <= 1.0)) rd.issue("yield", "severity", "must lie in [0,1]");
    env.severity = ConstantSeverity{constant_severity};

    // [cost]
    auto positive = [&](const char* key, double& target) {
        if (auto d = rd.number("cost", key, true)) {
            if (*d <= 0.0) rd.issue("cost", key, "must be positive");
            else target = *d;
        }
    };
    positive("attainable_yield_bushels_per_acre", out.cost.attainable_yield_bushels_per_acre);
    positive("revenue_price_per_bushel", out.cost.revenue_price_per_bushel);
    positive("pesticide_price_per_acre", out.cost.pesticide_price_per_acre);
    positive("cell_area_acres", out.cost.cell_area_acres);
    env.cell_area_acres = out.cost.cell_area_acres;
    env.yield.uay = out.cost.attainable_yield_bushels_per_acre * out.cost.cell_area_acres;
    env.yield.ppb = out.cost.revenue_price_per_bushel;
    env.yield.upp = out.cost.pesticide_price_per_acre * out.cost.cell_area_acres;

    // [input_files]
    std::optional<Frame> frame;
    if (spec_ok) {
        env.grid = default_rect_grid(spec);
        frame = Frame{0.0, 0.0, spec.total_width, spec.total_length};
        const int canvas_rows = std::max(4, spec.grid_rows() * 8);
        const int canvas_cols = std::max(4, spec.grid_cols() * 8);
        if (const auto* shape = rd.get("input_files", "shape_file", false); shape && !is_placeholder(*shape)) {
            if (std::filesystem::path(*shape).extension() == ".shp") {
                rd.issue("input_files", "shape_file", "binary shapefiles are not supported; provide an x,y polygon CSV");
            } else {
                try {
                    const auto outline = load_polygon_csv(resolve(base_dir, *shape));
                    frame = bbox(outline);
                    if (frame->max_x <= frame->min_x || frame->max_y <= frame->min_y) throw Error("empty interior");
                    env.grid = build_grid(rasterize_polygon(map_to_canvas(outline, *frame, canvas_rows, canvas_cols),
                                                            canvas_rows, canvas_cols),
                                          spec);
                } catch (const std::exception& e) {
                    rd.issue("input_files", "shape_file", e.what());
                    frame.reset();
                }
            }
        }
        if (const auto* m = rd.get("input_files", "manageable_shape_file", false); m && !is_placeholder(*m) && frame) {
            try {
                const auto outline = load_polygon_csv(resolve(base_dir, *m));
                Mask mask = build_grid(
                                rasterize_polygon(map_to_canvas(outline, *frame, canvas_rows, canvas_cols), canvas_rows,
                                                  canvas_cols),
                                spec)
                                .growable;
                for (std::size_t i = 0; i < mask.size(); ++i) mask.values()[i] &= env.grid.growable.values()[i];
                env.manageable = std::move(mask);
            } catch (const std::exception& e) {
                rd.issue("input_files", "manageable_shape_file", e.what());
            }
        }
    }
    if (const auto* w = rd.get("input_files", "weather_file", false); w && !is_placeholder(*w)) {
        try {
            env.weather = load_weather(resolve(base_dir, *w), env.calendar.season_length);
        } catch (const std::exception& e) {
            rd.issue("input_files", "weather_file", e.what());
        }
    }
    if (const auto* t = rd.get("input_files", "severity_table_file", false); t && !is_placeholder(*t)) {
        try {
            env.severity = load_severity_table(resolve(base_dir, *t));
        } catch (const std::exception& e) {
            rd.issue("input_files", "severity_table_file", e.what());
        }
        if (!env.weather) rd.issue("input_files", "weather_file", "a severity table requires a weather file");
    }
    if (const auto* s = rd.get("input_files", "simulator_file", false); s && !is_placeholder(*s)) {
        out.warnings.push_back("[input_files] simulator_file is accepted but not used");
    }

    // [policy]
    rd.read("policy", "schedule_day", out.policy.schedule_day);
    rd.read("policy", "schedule_grade", out.policy.schedule_grade);
    rd.read("policy", "reactive_threshold", out.policy.reactive_threshold);
    rd.read("policy", "reactive_grade", out.policy.reactive_grade);
    const int n_actions = static_cast<int>(env.actions.size());
    if (out.policy.schedule_day < 0 || out.policy.schedule_day >= env.calendar.season_length) {
        rd.issue("policy", "schedule_day", "must lie within the season");
    }
    if (out.policy.schedule_grade < 0 || out.policy.schedule_grade >= n_actions) {
        rd.issue("policy", "schedule_grade", "not a valid action index");
    }
    if (out.policy.reactive_grade < 0 || out.policy.reactive_grade >= n_actions) {
        rd.issue("policy", "reactive_grade", "not a valid action index");
    }
    if (out.policy.reactive_threshold < 1) rd.issue("policy", "reactive_threshold", "must be at least 1");

    // [value_agent] / [pg_agent]
    auto hidden = [&](const char* section, std::vector<int>& target) {
        if (auto v = rd.numbers(section, "hidden")) {
            target.clear();
            for (double d : *v) target.push_back(static_cast<int>(d));
        }
    };
    auto& va = out.value_agent;
    hidden("value_agent", va.hidden);
    rd.read("value_agent", "learning_rate", va.learning_rate);
    rd.read("value_agent", "gamma", va.gamma);
    rd.read("value_agent", "replay_capacity", va.replay_capacity);
    rd.read("value_agent", "replay_start_size", va.replay_start_size);
    rd.read("value_agent", "minibatch_size", va.minibatch_size);
    rd.read("value_agent", "update_interval", va.update_interval);
    rd.read("value_agent", "target_update_interval", va.target_update_interval);
    rd.read("value_agent", "epsilon_start", va.epsilon_start);
    rd.read("value_agent", "epsilon_end", va.epsilon_end);
    rd.read("value_agent", "epsilon_decay_steps", va.epsilon_decay_steps);
    rd.read("value_agent", "reward_scale", va.reward_scale);
    rd.read("value_agent", "eval_episodes", va.eval_episodes);
    try {
        va.validate();
    } catch (const Error& e) {
        rd.issue("value_agent", "", e.what());
    }
    auto& pg = out.pg_agent;
    hidden("pg_agent", pg.hidden);
    rd.read("pg_agent", "learning_rate", pg.learning_rate);
    rd.read("pg_agent", "rollout_length", pg.rollout_length);
    rd.read("pg_agent", "minibatch_size", pg.minibatch_size);
    rd.read("pg_agent", "epochs", pg.epochs);
    rd.read("pg_agent", "clip", pg.clip);
    rd.read("pg_agent", "entropy_coef", pg.entropy_coef);
    rd.read("pg_agent", "gamma", pg.gamma);
    rd.read("pg_agent", "gae_lambda", pg.gae_lambda);
    rd.read("pg_agent", "reward_scale", pg.reward_scale);
    rd.read("pg_agent", "eval_episodes", pg.eval_episodes);
    try {
        pg.validate();
    } catch (const Error& e) {
        rd.issue("pg_agent", "", e.what());
    }

    if (rd.issues.empty()) {
        try {
            env.validate();
        } catch (const ConfigError& e) {
            rd.issues.insert(rd.issues.end(), e.issues().begin(), e.issues().end());
        }
    }
    if (!rd.issues.empty()) throw ConfigError(std::move(rd.issues));
    return out;
}

WeatherSeries load_weather(const std::string& path, int season_length) {
    const CsvTable csv = read_csv_file(path);
    if (csv.header != std::vector<std::string>{"day", "tavg_c", "precip_mm"}) {
        throw ParseError(path, 1, "expected header 'day,tavg_c,precip_mm'");
    }
    WeatherSeries series;
    std::optional<double> first_day;
    for (const auto& row : csv.rows) {
        const double day = parse_number(row, 0, path);
        if (!first_day) first_day = day;
        if (day != *first_day + static_cast<double>(series.size())) throw ParseError(path, row.line, "days must be consecutive");
        series.push_back({parse_number(row, 1, path), parse_number(row, 2, path)});
    }
    if (static_cast<int>(series.size()) != season_length) {
        throw ParseError(path, 0,
                         "expected " + std::to_string(season_length) + " weather rows, found " +
                             std::to_string(series.size()));
    }
    return series;
}

std::string config_fingerprint(const RawConfig& raw) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (const unsigned char c : serialize_config(raw)) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

std::string default_config_text() {
    return R"([input_files]
shape_file = *.shp
weather_file = *.csv
simulator_file = *.csv

[agent]
action_type = discrete
action = 0., 0.3, 0.5, 0.9
state = health + day

[env]
reward = r1 + r2
total_length = 100
total_width = 100
crop_length = 10
crop_width = 10
n_seeds = 1
season_length = 115
onset_window = 44, 55

[threat]
s_high = 0.30
s_med = 0.15
s_low = 0.05
zone_radii = 1, 2, 3
lambda_reinfect = 0.5
lambda_spray = 0.8
t_degrade = 12

[yield]
t_half = 6
severity = 1.0

[cost]
attainable_yield_bushels_per_acre = 60
revenue_price_per_bushel = 8
pesticide_price_per_acre = 17
cell_area_acres = 0.01
action_cost_factors = 0, 0.6, 0.8, 1.0
)";
}

}  // namespace biosim
