#pragma once

#include "diagnostics.hpp"
#include "scenarios.hpp"

namespace corner_euler {

struct RunParams {
    double T = 1.0;
    double dt = 1e-2;
    int sample_every = 10;
    QuadratureConfig quad;
    double arrival_threshold = 0.0;  // 0 = one finest sub-cell diameter
    int workers = 0;                 // 0 = default_worker_count()
    bool quiet = true;
};

struct SampleRecord {
    double time = 0.0;
    double lipschitz = 0.0;
    std::vector<double> marker_x1;
    double circulation = 0.0;
    double omega_min = 0.0;
    double omega_max = 0.0;
};

struct RunResult {
    SimulationState state;
    GrowthSeries series;
    std::vector<SampleRecord> samples;
    bool any_arrival = false;
    bool all_arrived = false;
    std::optional<double> stop_time;  // early stop on arrival of every marker
    double arrival_threshold = 0.0;
};

inline double finest_subcell_diameter(const SimulationState& st, const QuadratureConfig& quad) {
    double dmin = std::numeric_limits<double>::infinity();
    for (const VortexCell& c : st.cells) {
        const double d = c.footprint.valid() ? c.footprint.diameter() : std::sqrt(c.area);
        dmin = std::min(dmin, d);
    }
    return dmin * std::ldexp(1.0, -quad.refinement_depth);
}

namespace detail {

inline SampleRecord sample_state(const SimulationState& st,
                                 std::span<const PhysicalPoint> probes) {
    SampleRecord rec;
    rec.time = st.time;
    rec.lipschitz = lipschitz_quotient(st, probes);
    for (const BoundaryMarker& m : st.markers) rec.marker_x1.push_back(m.x1);
    rec.circulation = st.circulation();
    const auto [lo, hi] = st.omega_range();
    rec.omega_min = lo;
    rec.omega_max = hi;
    return rec;
}

}  // namespace detail

/// Step a prepared state to time T, sampling diagnostics along the way.
/// In the finite-time regime (1 < beta < 2) markers freeze on reaching the
/// arrival threshold and the run stops early once every marker has arrived.
inline RunResult run_simulation(SimulationState st, const RunParams& p) {
    if (!(p.T >= 0.0)) throw ConfigError("run_simulation: T >= 0 required");
    if (p.T > 0.0 && !(p.dt > 0.0 && p.dt <= p.T))
        throw ConfigError("run_simulation: need 0 < dt <= T");

    RunResult out;
    out.arrival_threshold =
        p.arrival_threshold > 0.0 ? p.arrival_threshold : finest_subcell_diameter(st, p.quad);
    const double beta = st.dom.beta();
    const bool finite_time_regime = beta > 1.0 && beta < 2.0;
    const std::vector<PhysicalPoint> probes = probe_points(st.dom);

    const double circ0 = st.circulation();
    const auto [w0lo, w0hi] = st.omega_range();

    auto record = [&](const SimulationState& s) {
        SampleRecord rec = detail::sample_state(s, probes);
        // exact Lagrangian invariants, asserted every sample
        if (std::abs(rec.circulation - circ0) > 1e-12 * std::max(1.0, std::abs(circ0)) ||
            rec.omega_min != w0lo || rec.omega_max != w0hi) {
            throw std::logic_error("transport invariant violated (circulation or omega range)");
        }
        if (std::isfinite(rec.lipschitz)) {
            out.series.times.push_back(rec.time);
            out.series.values.push_back(rec.lipschitz);
        }
        out.samples.push_back(std::move(rec));
    };

    record(st);
    const long nsteps = p.T > 0.0 ? static_cast<long>(std::llround(p.T / p.dt)) : 0;
    for (long step = 1; step <= nsteps; ++step) {
        st = rk4_step(st, p.dt, p.quad, p.workers);
        for (BoundaryMarker& m : st.markers) {
            m.history.emplace_back(st.time, m.x1);
            if (finite_time_regime && !m.arrived() && m.x1 < out.arrival_threshold) {
                m.arrival_time = st.time;
                out.any_arrival = true;
            }
        }
        const bool last = step == nsteps;
        if (step % std::max(1, p.sample_every) == 0 || last) record(st);
        if (finite_time_regime) {
            bool all = !st.markers.empty();
            for (const BoundaryMarker& m : st.markers) all = all && m.arrived();
            if (all) {
                out.all_arrived = true;
                out.stop_time = st.time;
                if (!last) record(st);
                break;
            }
        }
    }
    out.series.source = "markers+probes";
    out.state = std::move(st);
    return out;
}

/// Convenience wrapper: build the scenario state and run it.
inline RunResult run_scenario(const ScenarioSpec& spec, const RunParams& p) {
    return run_simulation(make_initial_state(spec), p);
}

}  // namespace corner_euler
