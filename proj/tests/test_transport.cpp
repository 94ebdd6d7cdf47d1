#include <catch2/catch_amalgamated.hpp>

#include "corner_euler/scenarios.hpp"
#include "corner_euler/transport.hpp"

using namespace corner_euler;

namespace {

SimulationState scenario_state(ScenarioKind kind, double theta, int n, double marker_x1) {
    ScenarioSpec spec;
    spec.kind = kind;
    spec.theta = theta;
    spec.n_r = n;
    spec.n_phi = n;
    spec.marker_starts = {marker_x1};
    return make_initial_state(spec);
}

SimulationState advance(SimulationState st, double T, double dt) {
    const long n = std::llround(T / dt);
    for (long i = 0; i < n; ++i) st = rk4_step(st, dt);
    return st;
}

}  // namespace

TEST_CASE("rk4 rejects a non-positive step") {
    auto st = scenario_state(ScenarioKind::A_abs_plus_one, kPi / 3.0, 4, 0.1);
    CHECK_THROWS_AS(rk4_step(st, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(rk4_step(st, -1e-3), std::invalid_argument);
}

TEST_CASE("zero vorticity is a fixed point of the dynamics") {
    SectorDomain dom(kPi / 3.0);
    SimulationState st;
    st.dom = dom;
    st.cells = build_cells(dom, 8, 8, [](PhysicalPoint) { return 0.0; });
    BoundaryMarker m;
    m.x1 = 0.1;
    st.markers.push_back(m);
    const SimulationState next = rk4_step(st, 1e-2);
    for (std::size_t i = 0; i < st.cells.size(); ++i) {
        CHECK(next.cells[i].position.x1 == st.cells[i].position.x1);
        CHECK(next.cells[i].position.x2 == st.cells[i].position.x2);
    }
    CHECK(next.markers[0].x1 == 0.1);
    CHECK(next.time == Catch::Approx(1e-2));
    CHECK(next.step_count == 1);
}

TEST_CASE("markers stay on the edge and drift toward the corner") {
    auto st = scenario_state(ScenarioKind::A_abs_plus_one, kPi / 3.0, 12, 0.1);
    const double x0 = st.markers[0].x1;
    st = advance(st, 0.1, 1e-2);
    CHECK(st.markers[0].position().x2 == 0.0);
    CHECK(st.markers[0].x1 > 0.0);
    CHECK(st.markers[0].x1 < x0);  // edge inflow for positive vorticity
}

TEST_CASE("circulation and vorticity extrema are exactly conserved") {
    auto st = scenario_state(ScenarioKind::A_abs_plus_one, kPi / 3.0, 10, 0.1);
    const double circ0 = st.circulation();
    const auto [lo0, hi0] = st.omega_range();
    st = advance(st, 0.1, 1e-2);
    CHECK(st.circulation() == circ0);
    const auto [lo, hi] = st.omega_range();
    CHECK(lo == lo0);
    CHECK(hi == hi0);
}

TEST_CASE("cells remain inside the closed sector") {
    auto st = scenario_state(ScenarioKind::A_abs_plus_one, kPi / 3.0, 12, 0.1);
    st = advance(st, 0.2, 1e-2);
    for (const VortexCell& c : st.cells) CHECK(st.dom.contains(c.position));
}

TEST_CASE("frozen markers do not move") {
    auto st = scenario_state(ScenarioKind::A_abs_plus_one, kPi / 3.0, 10, 0.1);
    st.markers[0].arrival_time = 0.0;
    const double x0 = st.markers[0].x1;
    st = advance(st, 0.05, 1e-2);
    CHECK(st.markers[0].x1 == x0);
}

TEST_CASE("dt halving: fourth-order Richardson ratio") {
    auto state0 = scenario_state(ScenarioKind::A_abs_plus_one, kPi / 3.0, 16, 0.1);
    const double T = 0.5;
    const double a = advance(state0, T, 2e-2).markers[0].x1;
    const double b = advance(state0, T, 1e-2).markers[0].x1;
    const double c = advance(state0, T, 5e-3).markers[0].x1;
    const double d1 = std::abs(a - b);
    const double d2 = std::abs(b - c);
    REQUIRE(d2 > 0.0);
    CHECK(d1 / d2 >= 8.0);
    CHECK(d1 / d2 <= 32.0);
}

TEST_CASE("vorticity interpolation basics") {
    auto st = scenario_state(ScenarioKind::A_abs_plus_one, kPi / 3.0, 16, 0.1);

    SECTION("k must be positive") {
        CHECK_THROWS_AS(vorticity_at({0.1, 0.1}, st, 0), std::invalid_argument);
    }
    SECTION("corner returns the initial corner value for all time") {
        CHECK(vorticity_at({0.0, 0.0}, st) == 1.0);
        st = advance(st, 0.05, 1e-2);
        CHECK(vorticity_at({0.0, 0.0}, st) == 1.0);
    }
    SECTION("exact hit on a cell center returns that cell's value") {
        const VortexCell& c = st.cells[40];
        CHECK(vorticity_at(c.position, st) == c.omega);
    }
    SECTION("t = 0 field is reproduced away from the corner") {
        for (double rho : {0.3, 0.5, 0.7}) {
            const double a = 0.4 * st.dom.theta();
            const PhysicalPoint p{rho * st.dom.radius() * std::cos(a),
                                  rho * st.dom.radius() * std::sin(a)};
            CHECK(vorticity_at(p, st) == Catch::Approx(radius_of(p) + 1.0).epsilon(0.05));
        }
    }
}
