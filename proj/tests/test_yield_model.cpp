#include <doctest.h>

#include <cmath>

#include "biosim/error.hpp"
#include "biosim/stress_dynamics.hpp"
#include "biosim/yield_model.hpp"

using namespace biosim;

namespace {

YieldParams flat_ymin(double y) {
    YieldParams p;
    p.y_min_by_stage.fill(y);
    return p;
}

}  // namespace

TEST_SUITE("yield_model") {

TEST_CASE("growth stages on the default calendar") {
    const GrowthCalendar cal;
    CHECK(growth_stage(0, cal) == 0);
    CHECK(growth_stage(43, cal) == 0);
    CHECK(growth_stage(44, cal) == 1);
    CHECK(growth_stage(64, cal) == 3);
    CHECK(growth_stage(114, cal) == 7);
    CHECK_THROWS_AS(growth_stage(115, cal), Error);
    CHECK_THROWS_AS(growth_stage(-1, cal), Error);
}

TEST_CASE("calendar invariants") {
    GrowthCalendar cal;
    CHECK_NOTHROW(cal.validate());
    cal.stage_start_days[2] = cal.stage_start_days[1];
    CHECK_THROWS_AS(cal.validate(), Error);
    cal = {};
    cal.onset_first = 40;  // before R1
    CHECK_THROWS_AS(cal.validate(), Error);
    cal = {};
    cal.onset_last = 200;
    CHECK_THROWS_AS(cal.validate(), Error);
}

TEST_CASE("default y_min ramp") {
    const YieldParams p;
    CHECK(p.y_min(1) == doctest::Approx(0.10));
    CHECK(p.y_min(4) == doctest::Approx(0.50));
    CHECK(p.y_min(7) == doctest::Approx(0.90));
    CHECK_THROWS_AS(p.y_min(0), Error);
}

TEST_CASE("eta_y fixtures") {
    const YieldParams p = flat_ymin(0.1);
    CHECK(eta_y(6.0, 1, p) == doctest::Approx(0.1 + 0.9 / 2).epsilon(1e-15));
    const double e6 = std::exp(6.0);
    CHECK(std::abs(eta_y(0.0, 1, p) - (0.1 + 0.9 * e6 / (1 + e6))) < 1e-15);
    CHECK(eta_y(0.0, 1, p) == doctest::Approx(0.99777).epsilon(1e-5));
    CHECK(std::abs(eta_y(60.0, 1, p) - 0.1) < 1e-9);
}

TEST_CASE("yield loss fixtures") {
    const YieldParams p = flat_ymin(0.1);
    CHECK(yield_loss(30.0, 1, 0.0, p) == 0.0);
    CHECK(yield_loss(6.0, 1, 1.0, p) == doctest::Approx(0.45).epsilon(1e-15));
    CHECK(yield_loss(9.0, 3, 0.5, p) == 0.5 * yield_loss(9.0, 3, 1.0, p));
}

TEST_CASE("eta_y and yield_loss properties") {
    Rng rng(13);
    const YieldParams p;
    for (int i = 0; i < 2000; ++i) {
        const double t = uniform01(rng) * 30.0;
        const double dt = 0.01 + uniform01(rng);
        const int g = 1 + static_cast<int>(rng() % 7);
        const double s = uniform01(rng);
        CHECK(eta_y(t, g, p) > p.y_min(g));
        CHECK(eta_y(t, g, p) < 1.0);
        CHECK(eta_y(t + dt, g, p) < eta_y(t, g, p));
        CHECK(yield_loss(t + dt, g, s, p) >= yield_loss(t, g, s, p));
        CHECK(yield_loss(t, g, std::min(1.0, s + 0.1), p) >= yield_loss(t, g, s, p));
        if (g < 7) CHECK(yield_loss(t, g, s, p) >= yield_loss(t, g + 1, s, p));
        CHECK(yield_loss(t, g, s, p) <= 1.0 - p.y_min(g));
    }
    YieldParams lo = flat_ymin(0.2), hi = flat_ymin(0.3);
    CHECK(eta_y(4.0, 2, hi) > eta_y(4.0, 2, lo));
}

TEST_CASE("yield params invariants") {
    YieldParams p;
    CHECK_NOTHROW(p.validate());
    p.y_min_by_stage[3] = 0.05;
    CHECK_THROWS_AS(p.validate(), Error);
    p = {};
    p.t_half = 0.0;
    CHECK_THROWS_AS(p.validate(), Error);
    p = {};
    p.upp = -1.0;
    CHECK_THROWS_AS(p.validate(), Error);
}

TEST_CASE("severity models") {
    CHECK(severity(ConstantSeverity{0.7}, std::nullopt) == 0.7);
    WeatherTable t;
    t.temp_axis = {10.0, 30.0};
    t.precip_axis = {0.0, 20.0};
    t.values = Grid<double>(2, 2);
    t.values(0, 0) = 0.0;
    t.values(0, 1) = 0.0;
    t.values(1, 0) = 1.0;
    t.values(1, 1) = 1.0;
    const SeverityModel m = t;
    CHECK_NOTHROW(validate_severity(m));
    CHECK(severity(m, WeatherDay{20.0, 10.0}) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(severity(m, WeatherDay{10.0, 20.0}) == 1.0);
    CHECK(severity(m, WeatherDay{30.0, 0.0}) == 0.0);
    CHECK(severity(m, WeatherDay{99.0, 99.0}) == 1.0);  // clamped to the axes
    CHECK_THROWS_AS(severity(m, std::nullopt), ConfigError);

    WeatherTable bad = t;
    bad.values(0, 0) = 1.5;
    CHECK_THROWS_AS(validate_severity(SeverityModel{bad}), Error);
    bad = t;
    bad.temp_axis = {30.0, 10.0};
    CHECK_THROWS_AS(validate_severity(SeverityModel{bad}), Error);
}

TEST_CASE("accrual") {
    const YieldParams p;
    SubRegionRecord rec;
    rec.state = HealthState::Infected;
    rec.onset_stage = 2;
    rec.severity = 0.8;
    rec.days_infected = 1;
    CHECK(accrue_loss(rec, rec.severity, p) == doctest::Approx(yield_loss(1, 2, 0.8, p)).epsilon(1e-15));

    SUBCASE("telescoping over an untreated spell") {
        Rng rng(2);
        for (int trial = 0; trial < 200; ++trial) {
            SubRegionRecord r;
            r.state = HealthState::Infected;
            r.onset_stage = 1 + static_cast<int>(rng() % 7);
            r.severity = uniform01(rng);
            const int days = 1 + static_cast<int>(rng() % 115);
            double sum = 0.0;
            for (int d = 1; d <= days; ++d) {
                r.days_infected = d;
                const double before = r.accrued_loss;
                const double inc = accrue_loss(r, r.severity, p);
                CHECK(inc >= 0.0);
                CHECK(r.accrued_loss >= before);
                sum += inc;
            }
            CHECK(std::abs(sum - yield_loss(days, *r.onset_stage, r.severity, p)) < 1e-12);
        }
    }
    SUBCASE("recovery freezes the loss") {
        rec.days_infected = 5;
        accrue_loss(rec, rec.severity, p);
        rec.state = HealthState::Healthy;
        const double frozen = rec.accrued_loss;
        CHECK(accrue_loss(rec, rec.severity, p) == 0.0);
        CHECK(rec.accrued_loss == frozen);
    }
    SUBCASE("degradation jumps to the asymptote") {
        rec.days_infected = 12;
        rec.state = HealthState::Degraded;
        accrue_loss(rec, rec.severity, p);
        CHECK(rec.accrued_loss == doctest::Approx((1.0 - p.y_min(2)) * 0.8).epsilon(1e-15));
        CHECK(accrue_loss(rec, rec.severity, p) == 0.0);
    }
    SUBCASE("never exceeds one") {
        YieldParams zero = flat_ymin(0.0);
        SubRegionRecord r;
        r.state = HealthState::Degraded;
        r.onset_stage = 1;
        r.accrued_loss = 0.9;
        accrue_loss(r, 1.0, zero);
        CHECK(r.accrued_loss <= 1.0);
    }
}

}  // TEST_SUITE
