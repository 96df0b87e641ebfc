#include <doctest.h>

#include <filesystem>

#include "biosim/config_io.hpp"
#include "biosim/error.hpp"
#include "malformed_cases.hpp"

using namespace biosim;

namespace {

const std::filesystem::path kFixtures = BIOSIM_FIXTURE_DIR;

bool has_issue(const ConfigError& e, const std::string& section, const std::string& key) {
    for (const auto& i : e.issues()) {
        if (i.section == section && (key.empty() || i.key == key)) return true;
    }
    return false;
}

}  // namespace

TEST_SUITE("config_io") {

TEST_CASE("listing parses verbatim") {
    const RawConfig raw = load_config_file((kFixtures / "sample.ini").string());
    CHECK(raw.sections.size() == 4);
    for (const char* s : {"input_files", "agent", "env", "cost"}) CHECK(raw.sections.count(s) == 1);
    CHECK(split_list(*raw.find("agent", "action")).size() == 4);
    CHECK(split_modules(*raw.find("env", "reward")) == std::vector<std::string>{"r1", "r2"});
    CHECK(*raw.find("env", "multi_level_crop_width") == "4");
}

TEST_CASE("listing needs an explicit cell area") {
    RawConfig raw = load_config_file((kFixtures / "sample.ini").string());
    try {
        build_env_config(raw);
        FAIL("expected a configuration error");
    } catch (const ConfigError& e) {
        CHECK(has_issue(e, "cost", "cell_area_acres"));
    }
    raw.sections["cost"]["cell_area_acres"] = "0.01";
    const BuiltConfig b = build_env_config(raw);
    CHECK(b.env.yield.uay == doctest::Approx(0.6).epsilon(1e-12));
    CHECK(b.env.yield.upp == doctest::Approx(0.17).epsilon(1e-12));
    CHECK(b.env.yield.ppb == 8.0);
    CHECK(b.env.grid.rows == 10);
    CHECK_FALSE(b.env.observe_day);  // state = health
    CHECK(b.env.cost_in_reward);
    CHECK(b.multi_level.at("multi_level_crop_width") == 4.0);
    REQUIRE(b.env.actions.size() == 4);
    CHECK(b.env.actions[3].recovery_prob == 0.9);
    CHECK(b.env.actions[0].recovery_prob == 0.0);
}

TEST_CASE("round trip parse serialize parse") {
    const RawConfig a = load_config_file((kFixtures / "sample.ini").string());
    CHECK(parse_config(serialize_config(a)) == a);
    const RawConfig d = parse_config(default_config_text());
    CHECK(parse_config(serialize_config(d)) == d);
    CHECK(config_fingerprint(a) == config_fingerprint(parse_config(serialize_config(a))));
    CHECK(config_fingerprint(a) != config_fingerprint(d));
}

TEST_CASE("dialect details") {
    const RawConfig raw = parse_config("; lead\n[a]\nx = 1 # trailing\ny=0.,0.3 ;c\n  [ b ]  \nz =\n");
    CHECK(*raw.find("a", "x") == "1");
    CHECK(split_list(*raw.find("a", "y")).size() == 2);
    CHECK(raw.find("b", "z")->empty());
    CHECK(parse_config("").sections.empty());
    CHECK_THROWS_WITH_AS(parse_config("[a]\njunk\n", "t.ini"), doctest::Contains("t.ini:2"), ParseError);
}

TEST_CASE("empty config fails with missing env") {
    try {
        build_env_config(parse_config(""));
        FAIL("expected a configuration error");
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("missing [env]") != std::string::npos);
    }
}

TEST_CASE("overrides and reward composition") {
    RawConfig raw = parse_config(default_config_text());
    raw.sections["env"]["reward"] = "r1";
    raw.sections["threat"]["lambda_reinfect"] = "0.2";
    raw.sections["yield"]["severity"] = "0.4";
    raw.sections["extra"]["foo"] = "1";
    raw.sections["env"]["bogus"] = "1";
    const BuiltConfig b = build_env_config(raw);
    CHECK_FALSE(b.env.cost_in_reward);
    CHECK(b.env.spread.lambda_reinfect == 0.2);
    CHECK(std::get<ConstantSeverity>(b.env.severity).value == 0.4);
    CHECK(b.warnings.size() == 2);  // unknown section and unknown key; placeholders stay silent

    raw.sections["threat"]["lambda_reinfect"] = "0.9";
    try {
        build_env_config(raw);
        FAIL("expected a configuration error");
    } catch (const ConfigError& e) {
        CHECK(has_issue(e, "threat", "lambda_reinfect"));
    }
}

TEST_CASE("input files resolve relative to the config") {
    RawConfig raw = parse_config(default_config_text());
    raw.sections["input_files"]["shape_file"] = "triangle.csv";
    raw.sections["input_files"]["weather_file"] = "weather_115.csv";
    raw.sections["input_files"]["severity_table_file"] = "severity_table.csv";
    const BuiltConfig b = build_env_config(raw, kFixtures);
    CHECK(b.env.grid.growable_count() < 100);
    CHECK(b.env.grid.growable_count() > 40);
    CHECK(b.env.grid.growable(9, 0) == 1);  // the right angle sits at the bottom left
    CHECK(b.env.grid.growable(0, 9) == 0);
    REQUIRE(b.env.weather);
    CHECK(b.env.weather->size() == 115);
    CHECK(std::holds_alternative<WeatherTable>(b.env.severity));

    raw.sections["input_files"]["manageable_shape_file"] = "triangle.csv";
    const BuiltConfig m = build_env_config(raw, kFixtures);
    REQUIRE(m.env.manageable);
    CHECK(*m.env.manageable == m.env.grid.growable);

    raw.sections["input_files"]["shape_file"] = "field.shp";
    CHECK_THROWS_AS(build_env_config(raw, kFixtures), ConfigError);
}

TEST_CASE("weather loading") {
    CHECK(load_weather((kFixtures / "weather_115.csv").string(), 115).size() == 115);
    CHECK_THROWS_AS(load_weather((kFixtures / "weather_114.csv").string(), 115), ParseError);
    CHECK_THROWS_WITH_AS(load_weather((kFixtures / "weather_nan.csv").string(), 115),
                         doctest::Contains("weather_nan.csv:11"), ParseError);
}

TEST_CASE("malformed corpus reports provenance") {
    for (const auto& c : fixtures::kMalformed) {
        CAPTURE(c.file);
        const auto path = kFixtures / "malformed" / c.file;
        try {
            const RawConfig raw = load_config_file(path.string());
            build_env_config(raw, path.parent_path());
            FAIL("accepted a malformed configuration");
        } catch (const ConfigError& e) {
            CHECK(std::string(c.section) != "");
            CHECK(has_issue(e, c.section, c.key));
            CHECK(std::string(e.what()).find(c.where) != std::string::npos);
        } catch (const ParseError& e) {
            CHECK(std::string(c.section).empty());
            CHECK(std::string(e.what()).find(c.where) != std::string::npos);
        }
    }
}

}  // TEST_SUITE
