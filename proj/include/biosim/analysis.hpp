#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "biosim/env.hpp"
#include "biosim/grid.hpp"
#include "biosim/rng.hpp"

namespace biosim {

using NdviGrid = Grid<double>;

/// Synthetic NDVI distributions per health code (Healthy, Infected, Degraded).
/// Chosen so that a 0.7 threshold separates Healthy from the rest.
struct NdviParams {
    std::array<double, 3> mean{0.82, 0.60, 0.45};
    std::array<double, 3> spread{0.04, 0.05, 0.05};
};

/// Health codes 0/1/2 as in Observation; values clamped to [-1, 1].
NdviGrid ndvi_proxy(const Grid<std::uint8_t>& health, Rng& rng, const NdviParams& params = {});

/// ndvi < threshold (strict).
Mask threshold_infested(const NdviGrid& ndvi, double threshold = 0.7);

/// Two-sample Kolmogorov-Smirnov statistic. Throws Error on empty input.
double ks_statistic(const std::vector<double>& a, const std::vector<double>& b);

/// 1 - SS_res / SS_tot. Throws Error on length mismatch, fewer than 2 points
/// or constant `actual` ("undefined R²").
double r_squared(const std::vector<double>& predicted, const std::vector<double>& actual);

/// Grayscale P5 heatmap; NDVI -1..1 maps to 0..255.
void write_ndvi_pgm(std::ostream& out, const NdviGrid& ndvi, int scale = 8);

struct EpisodeSummary {
    double total_loss = 0.0;
    double loss_fraction = 0.0;
    double pesticide_cost = 0.0;
    double percent_sprayed = 0.0;
    std::size_t cells_sprayed = 0;
    double total_reward = 0.0;
};

EpisodeSummary summarize_episode(const EpisodeTrace& trace);

/// Unit economics needed to express totals per acre.
struct ReportEconomics {
    double uay = 0.0;  // bushels per cell
    double ppb = 0.0;
    double upp = 0.0;  // currency per cell application
    double cell_area_acres = 0.0;
    std::size_t growable_cells = 0;

    double field_acres() const { return cell_area_acres * static_cast<double>(growable_cells); }
    friend bool operator==(const ReportEconomics&, const ReportEconomics&) = default;
};

ReportEconomics report_economics(const EnvConfig& config);

struct RegimeResults {
    std::string label;
    std::vector<EpisodeSummary> episodes;
};

struct ComparisonRow {
    std::string label;
    double pesticide_cost_per_acre = 0.0;
    double yield_loss_percent = 0.0;
    double yield_cost = 0.0;
    double percent_sprayed = 0.0;
};

/// Per-regime means. Throws Error if a regime has no episodes.
std::vector<ComparisonRow> management_report(const std::vector<RegimeResults>& regimes, const ReportEconomics& econ);

/// Header: Location,Pesticide cost ($/Acre),Yield loss (%),Yield cost ($),% Sprayed
void write_report_csv(std::ostream& out, const std::vector<ComparisonRow>& rows);

/// On-disk form of one evaluated regime: DIR/meta.json and DIR/episodes.csv.
struct RegimeMeta {
    std::string label;
    std::string config_fingerprint;
    ReportEconomics econ;
    std::uint64_t seed = 0;
    std::size_t episodes = 0;
};

void write_regime(const std::string& dir, const RegimeMeta& meta, const std::vector<EpisodeSummary>& episodes);

struct LoadedReport {
    ReportEconomics econ;
    std::vector<RegimeResults> regimes;
};

/// Read every DIR/<regime>/ holding a meta.json, sorted by directory name.
/// Throws Error when regimes disagree on configuration or economics.
LoadedReport load_regimes(const std::string& dir);

}  // namespace biosim
