#include "biosim/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <random>

#include <json.hpp>

#include "biosim/csv.hpp"
#include "biosim/error.hpp"

namespace biosim {

NdviGrid ndvi_proxy(const Grid<std::uint8_t>& health, Rng& rng, const NdviParams& params) {
    NdviGrid out(health.rows(), health.cols(), 0.0);
    for (std::size_t i = 0; i < health.size(); ++i) {
        const std::size_t code = std::min<std::size_t>(health.values()[i], 2);
        std::normal_distribution<double> dist(params.mean[code], params.spread[code]);
        out.values()[i] = std::clamp(dist(rng), -1.0, 1.0);
    }
    return out;
}

Mask threshold_infested(const NdviGrid& ndvi, double threshold) {
    Mask out(ndvi.rows(), ndvi.cols(), 0);
    for (std::size_t i = 0; i < ndvi.size(); ++i) out.values()[i] = ndvi.values()[i] < threshold ? 1 : 0;
    return out;
}

double ks_statistic(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.empty() || b.empty()) throw Error("KS statistic needs two non-empty samples");
    std::vector<double> x(a), y(b);
    std::sort(x.begin(), x.end());
    std::sort(y.begin(), y.end());
    const double na = static_cast<double>(x.size());
    const double nb = static_cast<double>(y.size());
    std::size_t i = 0, j = 0;
    double d = 0.0;
    // Advance past every copy of the smaller value so ties are evaluated as a step.
    while (i < x.size() && j < y.size()) {
        const double v = std::min(x[i], y[j]);
        while (i < x.size() && x[i] == v) ++i;
        while (j < y.size() && y[j] == v) ++j;
        d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
    }
    return d;
}

double r_squared(const std::vector<double>& predicted, const std::vector<double>& actual) {
    if (predicted.size() != actual.size()) throw Error("R² needs series of equal length");
    if (actual.size() < 2) throw Error("R² needs at least two points");
    double mean = 0.0;
    for (double v : actual) mean += v;
    mean /= static_cast<double>(actual.size());
    double ss_res = 0.0, ss_tot = 0.0;
    for (std::size_t i = 0; i < actual.size(); ++i) {
        ss_res += (actual[i] - predicted[i]) * (actual[i] - predicted[i]);
        ss_tot += (actual[i] - mean) * (actual[i] - mean);
    }
    if (ss_tot == 0.0) throw Error("undefined R²: actual values are constant");
    return 1.0 - ss_res / ss_tot;
}

void write_ndvi_pgm(std::ostream& out, const NdviGrid& ndvi, int scale) {
    if (scale < 1) throw Error("scale must be positive");
    const int w = ndvi.cols() * scale, h = ndvi.rows() * scale;
    out << "P5\n" << w << ' ' << h << "\n255\n";
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            const double v = std::clamp(ndvi(y / scale, x / scale), -1.0, 1.0);
            out.put(static_cast<char>(static_cast<unsigned char>(std::lround((v + 1.0) * 127.5))));
        }
    }
}

EpisodeSummary summarize_episode(const EpisodeTrace& trace) {
    return {trace.total_loss,      trace.loss_fraction, trace.pesticide_cost,
            trace.percent_sprayed, trace.cells_sprayed, trace.total_reward};
}

ReportEconomics report_economics(const EnvConfig& config) {
    return {config.yield.uay, config.yield.ppb, config.yield.upp, config.cell_area_acres,
            config.grid.growable_count()};
}

std::vector<ComparisonRow> management_report(const std::vector<RegimeResults>& regimes, const ReportEconomics& econ) {
    if (!(econ.field_acres() > 0.0)) throw Error("report needs a positive field area");
    std::vector<ComparisonRow> rows;
    for (const auto& regime : regimes) {
        if (regime.episodes.empty()) throw Error("regime '" + regime.label + "' has no episodes");
        const double n = static_cast<double>(regime.episodes.size());
        double cost = 0.0, loss = 0.0, sprayed = 0.0;
        for (const auto& e : regime.episodes) {
            cost += e.pesticide_cost;
            loss += e.loss_fraction;
            sprayed += e.percent_sprayed;
        }
        ComparisonRow row;
        row.label = regime.label;
        row.pesticide_cost_per_acre = cost / n / econ.field_acres();
        row.yield_loss_percent = 100.0 * loss / n;
        row.yield_cost = row.yield_loss_percent * (econ.uay / econ.cell_area_acres) * econ.ppb * econ.field_acres() / 100.0;
        row.percent_sprayed = sprayed / n;
        rows.push_back(std::move(row));
    }
    return rows;
}

void write_report_csv(std::ostream& out, const std::vector<ComparisonRow>& rows) {
    out << "Location,Pesticide cost ($/Acre),Yield loss (%),Yield cost ($),% Sprayed\n";
    for (const auto& r : rows) {
        out << r.label << ',' << format_double(r.pesticide_cost_per_acre) << ',' << format_double(r.yield_loss_percent)
            << ',' << format_double(r.yield_cost) << ',' << format_double(r.percent_sprayed) << '\n';
    }
}

namespace {

constexpr const char* kEpisodesHeader =
    "episode,total_loss,loss_fraction,pesticide_cost,percent_sprayed,cells_sprayed,total_reward";

nlohmann::ordered_json econ_json(const ReportEconomics& e) {
    return {{"uay", e.uay},
            {"ppb", e.ppb},
            {"upp", e.upp},
            {"cell_area_acres", e.cell_area_acres},
            {"growable_cells", e.growable_cells}};
}

}  // namespace

void write_regime(const std::string& dir, const RegimeMeta& meta, const std::vector<EpisodeSummary>& episodes) {
    std::filesystem::create_directories(dir);
    const nlohmann::ordered_json j{{"label", meta.label},
                                   {"config_fingerprint", meta.config_fingerprint},
                                   {"economics", econ_json(meta.econ)},
                                   {"seed", meta.seed},
                                   {"episodes", meta.episodes}};
    std::ofstream m(std::filesystem::path(dir) / "meta.json");
    m << j.dump(2) << '\n';
    std::ofstream e(std::filesystem::path(dir) / "episodes.csv");
    e << kEpisodesHeader << '\n';
    for (std::size_t i = 0; i < episodes.size(); ++i) {
        const auto& s = episodes[i];
        e << i << ',' << format_double(s.total_loss) << ',' << format_double(s.loss_fraction) << ','
          << format_double(s.pesticide_cost) << ',' << format_double(s.percent_sprayed) << ',' << s.cells_sprayed << ','
          << format_double(s.total_reward) << '\n';
    }
    if (!m || !e) throw Error("failed to write regime output under " + dir);
}

LoadedReport load_regimes(const std::string& dir) {
    namespace fs = std::filesystem;
    if (!fs::is_directory(dir)) throw Error("not a directory: " + dir);
    std::vector<fs::path> regime_dirs;
    for (const auto& entry : fs::directory_iterator(dir)) {
        if (entry.is_directory() && fs::exists(entry.path() / "meta.json")) regime_dirs.push_back(entry.path());
    }
    std::sort(regime_dirs.begin(), regime_dirs.end());
    if (regime_dirs.empty()) throw Error("no regimes (subdirectories with meta.json) under " + dir);

    LoadedReport out;
    std::string fingerprint;
    for (const auto& rd : regime_dirs) {
        const std::string meta_path = (rd / "meta.json").string();
        std::ifstream in(meta_path);
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(in);
        } catch (const nlohmann::json::exception& e) {
            throw ParseError(meta_path, 0, e.what());
        }
        ReportEconomics econ;
        std::string fp, label;
        try {
            const auto& ej = j.at("economics");
            econ = {ej.at("uay").get<double>(), ej.at("ppb").get<double>(), ej.at("upp").get<double>(),
                    ej.at("cell_area_acres").get<double>(), ej.at("growable_cells").get<std::size_t>()};
            fp = j.at("config_fingerprint").get<std::string>();
            label = j.at("label").get<std::string>();
        } catch (const nlohmann::json::exception& e) {
            throw ParseError(meta_path, 0, e.what());
        }
        if (out.regimes.empty()) {
            out.econ = econ;
            fingerprint = fp;
        } else if (fp != fingerprint || !(econ == out.econ)) {
            throw Error("regime '" + label + "' was produced with a different configuration than '" +
                        out.regimes.front().label + "'");
        }

        const std::string csv_path = (rd / "episodes.csv").string();
        const CsvTable csv = read_csv_file(csv_path);
        if (csv.header != split(kEpisodesHeader, ',')) throw ParseError(csv_path, 1, "unexpected header");
        RegimeResults regime;
        regime.label = label;
        for (const auto& row : csv.rows) {
            EpisodeSummary s;
            s.total_loss = parse_number(row, 1, csv_path);
            s.loss_fraction = parse_number(row, 2, csv_path);
            s.pesticide_cost = parse_number(row, 3, csv_path);
            s.percent_sprayed = parse_number(row, 4, csv_path);
            s.cells_sprayed = static_cast<std::size_t>(parse_number(row, 5, csv_path));
            s.total_reward = parse_number(row, 6, csv_path);
            regime.episodes.push_back(s);
        }
        out.regimes.push_back(std::move(regime));
    }
    return out;
}

}  // namespace biosim
