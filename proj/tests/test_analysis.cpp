#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <sstream>

#include "biosim/agents.hpp"
#include "biosim/analysis.hpp"
#include "biosim/error.hpp"
#include "oracles.hpp"

using namespace biosim;

TEST_SUITE("analysis_report") {

TEST_CASE("NDVI proxy per health class") {
    Rng rng(1);
    const auto healthy = ndvi_proxy(Grid<std::uint8_t>(100, 100, 0), rng);
    std::size_t below = 0;
    for (double v : healthy.values()) below += v < 0.7;
    CHECK(below < 100);  // under 1% of cells
    const auto degraded = ndvi_proxy(Grid<std::uint8_t>(100, 100, 2), rng);
    double mean = 0.0;
    for (double v : degraded.values()) {
        CHECK(v >= -1.0);
        CHECK(v <= 1.0);
        mean += v;
    }
    mean /= 10000.0;
    CHECK(std::abs(mean - 0.45) < 4 * 0.05 / 100.0);
    Rng a(5), b(5);
    CHECK(ndvi_proxy(Grid<std::uint8_t>(4, 4, 1), a) == ndvi_proxy(Grid<std::uint8_t>(4, 4, 1), b));
}

TEST_CASE("threshold recovers the infested mask") {
    Rng rng(2);
    Grid<std::uint8_t> health(60, 60);
    for (auto& v : health.values()) v = static_cast<std::uint8_t>(rng() % 3);
    const Mask m = threshold_infested(ndvi_proxy(health, rng));
    std::size_t errors = 0;
    for (std::size_t i = 0; i < m.size(); ++i) errors += (m.values()[i] != 0) != (health.values()[i] != 0);
    CHECK(errors < 0.05 * m.size());

    CHECK(count_set(threshold_infested(NdviGrid(3, 3, 0.8))) == 0);
    CHECK(count_set(threshold_infested(NdviGrid(3, 3, 0.5))) == 9);
    CHECK(count_set(threshold_infested(NdviGrid(3, 3, 0.7))) == 0);
}

TEST_CASE("KS statistic") {
    CHECK(ks_statistic({1, 2, 3}, {1, 2, 3}) == 0.0);
    CHECK(ks_statistic({0, 1}, {5, 6, 7}) == 1.0);
    CHECK(std::abs(ks_statistic({0, 1}, {0, 0.5, 1}) - oracle::ks({0, 1}, {0, 0.5, 1})) < 1e-12);
    CHECK(std::abs(ks_statistic({0, 1}, {0, 0.5, 1}) - 1.0 / 6.0) < 1e-12);
    CHECK_THROWS_AS(ks_statistic({}, {1}), Error);
    Rng rng(3);
    for (int t = 0; t < 200; ++t) {
        std::vector<double> a(1 + rng() % 20), b(1 + rng() % 20);
        for (auto& v : a) v = static_cast<double>(rng() % 10);
        for (auto& v : b) v = static_cast<double>(rng() % 10);
        const double d = ks_statistic(a, b);
        CHECK(d >= 0.0);
        CHECK(d <= 1.0);
        CHECK(d == ks_statistic(b, a));
        CHECK(std::abs(d - oracle::ks(a, b)) < 1e-12);
    }
}

TEST_CASE("R squared") {
    CHECK(r_squared({1, 2, 3}, {1, 2, 3}) == 1.0);
    CHECK(std::abs(r_squared({2, 2, 2}, {1, 2, 3})) < 1e-12);
    // SS_res = 1, SS_tot = 2.
    CHECK(std::abs(r_squared({1, 2, 4}, {1, 2, 3}) - 0.5) < 1e-12);
    CHECK_THROWS_WITH_AS(r_squared({1, 2}, {3, 3}), doctest::Contains("undefined R"), Error);
    CHECK_THROWS_AS(r_squared({1}, {1}), Error);
    CHECK_THROWS_AS(r_squared({1, 2}, {1, 2, 3}), Error);
}

TEST_CASE("management report") {
    const EnvConfig cfg;
    const auto econ = report_economics(cfg);
    CHECK(econ.field_acres() == doctest::Approx(1.0));
    auto traces_of = [&](const Policy& p) {
        std::vector<EpisodeSummary> out;
        for (const auto& t : collect_traces(p, cfg, 12, 5)) out.push_back(summarize_episode(t));
        return out;
    };
    const std::vector<RegimeResults> regimes{{"nospray", traces_of(NoSprayPolicy{})},
                                             {"schedule", traces_of(SchedulePolicy(64, 3))}};
    const auto rows = management_report(regimes, econ);
    REQUIRE(rows.size() == 2);
    CHECK(rows[0].pesticide_cost_per_acre == 0.0);
    CHECK(rows[0].percent_sprayed == 0.0);
    CHECK(rows[1].percent_sprayed == 100.0);
    CHECK(rows[1].pesticide_cost_per_acre == doctest::Approx(17.0).epsilon(1e-12));

    double loss = 0.0;
    for (const auto& e : regimes[0].episodes) loss += e.loss_fraction;
    const double loss_pct = 100.0 * loss / 12.0;
    CHECK(std::abs(rows[0].yield_loss_percent - loss_pct) < 1e-9);
    CHECK(std::abs(rows[0].yield_cost - loss_pct * 60.0 * 8.0 * 1.0 / 100.0) < 1e-9);

    std::ostringstream csv;
    write_report_csv(csv, rows);
    CHECK(csv.str().rfind("Location,Pesticide cost ($/Acre),Yield loss (%),Yield cost ($),% Sprayed\n", 0) == 0);

    const auto dir = std::filesystem::temp_directory_path() / "biosim_report_test";
    std::filesystem::remove_all(dir);
    write_regime((dir / "nospray").string(), {"nospray", "abc", econ, 5, 12}, regimes[0].episodes);
    write_regime((dir / "schedule").string(), {"schedule", "abc", econ, 5, 12}, regimes[1].episodes);
    const auto loaded = load_regimes(dir.string());
    const auto again = management_report(loaded.regimes, loaded.econ);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        CHECK(std::abs(again[i].yield_loss_percent - rows[i].yield_loss_percent) < 1e-9);
        CHECK(std::abs(again[i].pesticide_cost_per_acre - rows[i].pesticide_cost_per_acre) < 1e-9);
        CHECK(std::abs(again[i].percent_sprayed - rows[i].percent_sprayed) < 1e-9);
    }
    write_regime((dir / "other").string(), {"other", "def", econ, 5, 12}, regimes[0].episodes);
    CHECK_THROWS_AS(load_regimes(dir.string()), Error);
    CHECK_THROWS_AS(management_report({{"empty", {}}}, econ), Error);
}

}  // TEST_SUITE
