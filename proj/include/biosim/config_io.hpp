#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "biosim/agents.hpp"
#include "biosim/env.hpp"

namespace biosim {

/// section -> key -> raw (trimmed) value.
struct RawConfig {
    std::map<std::string, std::map<std::string, std::string>> sections;

    bool has(const std::string& section, const std::string& key) const;
    const std::string* find(const std::string& section, const std::string& key) const;

    friend bool operator==(const RawConfig&, const RawConfig&) = default;
};

/// INI dialect: `[section]`, `key = value`, `#` or `;` comments (whole line, or
/// after whitespace), values trimmed. Duplicate keys, malformed headers, keys
/// outside a section and invalid UTF-8 raise ParseError with the line number.
RawConfig parse_config(std::string_view text, const std::string& source = "<config>");
RawConfig load_config_file(const std::string& path);
std::string serialize_config(const RawConfig& raw);

/// Comma-separated list, items trimmed ("0., 0.3" -> {"0.", "0.3"}).
std::vector<std::string> split_list(std::string_view value);
/// `+`-joined module names ("r1 + r2" -> {"r1", "r2"}).
std::vector<std::string> split_modules(std::string_view value);

struct CostConfig {
    double attainable_yield_bushels_per_acre = 60.0;
    double revenue_price_per_bushel = 8.0;
    double pesticide_price_per_acre = 17.0;
    double cell_area_acres = 0.01;
};

struct PolicySettings {
    int schedule_day = 64;  // R3 start on the default calendar
    int schedule_grade = 3;
    int reactive_threshold = 1;
    int reactive_grade = 3;
};

struct BuiltConfig {
    EnvConfig env;
    CostConfig cost;
    PolicySettings policy;
    ValueAgentConfig value_agent;
    PolicyGradientConfig pg_agent;
    std::vector<std::string> reward_terms;
    std::vector<std::string> state_terms;
    std::map<std::string, double> multi_level;  // parsed and retained, not used by the simulator
    std::vector<std::string> warnings;
};

/// Validate and assemble the simulator configuration. File paths are resolved
/// against `base_dir`; values containing '*' are treated as unset placeholders.
/// Throws ConfigError listing every problem with its section/key.
BuiltConfig build_env_config(const RawConfig& raw, const std::filesystem::path& base_dir = {});

/// Weather CSV: header `day,tavg_c,precip_mm`, exactly `season_length` consecutive days.
WeatherSeries load_weather(const std::string& path, int season_length);

/// FNV-1a 64 of the serialized form, as 16 hex digits; equal configs hash equal.
std::string config_fingerprint(const RawConfig& raw);

/// The built-in configuration written out as INI text.
std::string default_config_text();

}  // namespace biosim
