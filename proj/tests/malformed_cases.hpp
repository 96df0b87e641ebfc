#pragma once

// Malformed configuration corpus under fixtures/malformed with the provenance each must report.

namespace fixtures {

struct MalformedCase {
    const char* file;
    const char* section;  // empty for parse errors
    const char* key;      // empty matches any key in the section
    const char* where;    // substring expected in the message
};

inline constexpr MalformedCase kMalformed[] = {
    {"bad_section_header.ini", "", "", "bad_section_header.ini:3"},
    {"duplicate_key.ini", "", "", "duplicate_key.ini:6"},
    {"key_before_section.ini", "", "", "key_before_section.ini:1"},
    {"invalid_utf8.ini", "", "", "invalid_utf8.ini:1"},
    {"missing_env.ini", "env", "", "[env]"},
    {"negative_dimension.ini", "env", "total_length", "[env] total_length"},
    {"crop_exceeds_total.ini", "env", "crop_width", "[env] crop_width"},
    {"lambda_order.ini", "threat", "lambda_reinfect", "[threat] lambda_reinfect"},
    {"non_numeric_price.ini", "cost", "pesticide_price_per_acre", "[cost] pesticide_price_per_acre"},
    {"missing_cell_area.ini", "cost", "cell_area_acres", "[cost] cell_area_acres"},
    {"unknown_state_module.ini", "agent", "state", "[agent] state"},
    {"short_weather.ini", "input_files", "weather_file", "weather_114.csv"},
    {"nan_weather.ini", "input_files", "weather_file", "weather_nan.csv:11"},
    {"zero_seeds.ini", "env", "n_seeds", "[env] n_seeds"},
};

}  // namespace fixtures
