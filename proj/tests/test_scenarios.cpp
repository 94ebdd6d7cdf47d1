#include <catch2/catch_amalgamated.hpp>

#include "corner_euler/scenarios.hpp"

using namespace corner_euler;

TEST_CASE("initial data values at reference points") {
    SECTION("kind A: |x| + 1") {
        ScenarioSpec spec;
        spec.kind = ScenarioKind::A_abs_plus_one;
        spec.theta = kPi / 3.0;
        const auto w = make_initial_vorticity(spec);
        CHECK(w({0.1, 0.0}) == Catch::Approx(1.1).epsilon(1e-14));
        CHECK(w({0.0, 0.0}) == 1.0);
    }
    SECTION("kind B: capped ramp saturates at 2") {
        ScenarioSpec spec;
        spec.kind = ScenarioKind::B_capped_ramp;
        spec.theta = kPi / 2.0;
        spec.epsilon = 0.05;
        const auto w = make_initial_vorticity(spec);
        CHECK(w({0.2, 0.0}) == 2.0);
        CHECK(w({0.025, 0.0}) == Catch::Approx(1.5).epsilon(1e-14));
        CHECK(w({0.0, 0.0}) == 1.0);
    }
    SECTION("kind C: |x| vanishes at the corner") {
        ScenarioSpec spec;
        spec.kind = ScenarioKind::C_abs;
        spec.theta = 2.0 * kPi / 3.0;
        const auto w = make_initial_vorticity(spec);
        CHECK(w({0.0, 0.0}) == 0.0);
        CHECK(w({0.3, 0.0}) == Catch::Approx(0.3).epsilon(1e-14));
    }
    SECTION("kind D: positive inside the half-sector, zero on the bisector") {
        ScenarioSpec spec;
        spec.kind = ScenarioKind::D_odd_reflection;
        spec.theta = 4.0 * kPi / 3.0;
        const SectorDomain half = simulation_domain(spec);
        CHECK(half.theta() == Catch::Approx(2.0 * kPi / 3.0));
        const auto w = make_initial_vorticity(spec);
        for (double frac : {0.1, 0.3, 0.5, 0.7, 0.9}) {
            const double a = frac * half.theta();
            CHECK(w({0.2 * std::cos(a), 0.2 * std::sin(a)}) > 0.0);
        }
        const double ax = half.theta();  // reflex bisector
        CHECK(std::abs(w({0.2 * std::cos(ax), 0.2 * std::sin(ax)})) < 1e-15);
    }
}

TEST_CASE("angle gates reject out-of-regime scenarios") {
    ScenarioSpec spec;
    spec.kind = ScenarioKind::A_abs_plus_one;
    spec.theta = 2.0 * kPi / 3.0;
    CHECK_THROWS_AS(spec.validate(), ConfigError);

    spec.kind = ScenarioKind::B_capped_ramp;
    spec.theta = kPi / 2.0;
    spec.epsilon = 0.2;  // >= 0.2 R
    CHECK_THROWS_AS(spec.validate(), ConfigError);

    spec.kind = ScenarioKind::C_abs;
    spec.epsilon = 0.05;
    spec.theta = kPi / 3.0;
    CHECK_THROWS_AS(spec.validate(), ConfigError);

    spec.kind = ScenarioKind::D_odd_reflection;
    spec.theta = kPi / 2.0;
    CHECK_THROWS_AS(spec.validate(), ConfigError);
    spec.theta = 4.0 * kPi / 3.0;
    CHECK_NOTHROW(spec.validate());
}

TEST_CASE("mesh covers the sector area exactly") {
    SectorDomain dom(2.0 * kPi / 3.0);
    for (int n : {2, 7, 16}) {
        const auto cells = build_cells(dom, n, n, [](PhysicalPoint) { return 1.0; });
        double total = 0.0;
        for (const VortexCell& c : cells) {
            total += c.area;
            CHECK(radius_of(c.position) > 0.0);
            CHECK(dom.contains(c.position));
            CHECK(c.footprint.valid());
            CHECK(c.area == Catch::Approx(c.footprint.area()).epsilon(1e-14));
        }
        const double exact = 0.5 * dom.radius() * dom.radius() * dom.theta();
        CHECK(total == Catch::Approx(exact).epsilon(1e-13));
    }
}

TEST_CASE("cell sums converge to the integral of the initial data") {
    ScenarioSpec spec;
    spec.kind = ScenarioKind::A_abs_plus_one;
    spec.theta = kPi / 3.0;
    const SectorDomain dom = simulation_domain(spec);
    const auto w = make_initial_vorticity(spec);
    const double R = dom.radius(), th = dom.theta();
    const double exact = th * (R * R * R / 3.0 + R * R / 2.0);
    auto total = [&](int n) {
        double s = 0.0;
        for (const VortexCell& c : build_cells(dom, n, n, w)) s += c.omega * c.area;
        return s;
    };
    const double e1 = std::abs(total(16) - exact);
    const double e2 = std::abs(total(32) - exact);
    CHECK(e1 < 1e-3);
    CHECK(e2 < e1 / 3.0);  // second-order midpoint refinement
}

TEST_CASE("kind B mesh reproduces the ramp's Lipschitz seminorm") {
    ScenarioSpec spec;
    spec.kind = ScenarioKind::B_capped_ramp;
    spec.theta = kPi / 2.0;
    spec.epsilon = 0.02;
    const SectorDomain dom = simulation_domain(spec);
    const int n = 64;
    const auto cells = build_cells(dom, n, n, make_initial_vorticity(spec));
    // max difference quotient over radially adjacent cell pairs
    double q = 0.0;
    for (int i = 0; i + 1 < n; ++i) {
        const VortexCell& a = cells[static_cast<std::size_t>(i) * n];
        const VortexCell& b = cells[static_cast<std::size_t>(i + 1) * n];
        q = std::max(q, std::abs(b.omega - a.omega) / distance(a.position, b.position));
    }
    CHECK(q == Catch::Approx(1.0 / spec.epsilon).epsilon(0.05));
}

TEST_CASE("initial state wiring") {
    ScenarioSpec spec;
    spec.kind = ScenarioKind::A_abs_plus_one;
    spec.theta = kPi / 3.0;
    spec.n_r = 8;
    spec.n_phi = 8;
    const SimulationState st = make_initial_state(spec);
    CHECK(st.time == 0.0);
    CHECK(st.cells.size() == 64);
    CHECK(st.omega0_at_corner == 1.0);
    const auto ladder = default_marker_ladder(st.dom);
    REQUIRE(st.markers.size() == ladder.size());
    for (std::size_t i = 0; i < ladder.size(); ++i) {
        CHECK(st.markers[i].x1 == ladder[i]);
        CHECK(st.markers[i].omega0_value == Catch::Approx(ladder[i] + 1.0).epsilon(1e-14));
        CHECK_FALSE(st.markers[i].arrived());
    }
    // geometric ladder: constant ratio
    for (std::size_t i = 1; i < ladder.size(); ++i) {
        CHECK(ladder[i] / ladder[i - 1] == Catch::Approx(2.0).epsilon(1e-12));
    }
}

TEST_CASE("odd extension across the reflex bisector") {
    ScenarioSpec spec;
    spec.kind = ScenarioKind::D_odd_reflection;
    spec.theta = 4.0 * kPi / 3.0;
    const auto w_half = make_initial_vorticity(spec);
    const SectorDomain full(spec.theta, spec.radius);
    const auto w_full = odd_extend(w_half, full);

    const double axis = full.theta() / 2.0;
    for (double r : {0.05, 0.15, 0.3}) {
        for (double da : {0.1, 0.4, 0.8}) {
            const PhysicalPoint below{r * std::cos(axis - da), r * std::sin(axis - da)};
            const PhysicalPoint above{r * std::cos(axis + da), r * std::sin(axis + da)};
            CHECK(w_full(below) == Catch::Approx(w_half(below)).margin(1e-15));
            CHECK(w_full(above) == Catch::Approx(-w_half(below)).margin(1e-13));
        }
        const PhysicalPoint on_axis{r * std::cos(axis), r * std::sin(axis)};
        CHECK(w_full(on_axis) == 0.0);
    }
    CHECK(w_full({0.0, 0.0}) == 0.0);
}
