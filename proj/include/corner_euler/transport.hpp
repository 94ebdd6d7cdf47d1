#pragma once

#include <algorithm>
#include <optional>
#include <utility>
#include <vector>

#include "biot_savart.hpp"

namespace corner_euler {

/// Tracer pinned to the edge arg = 0; only its distance x1 to the corner
/// evolves.  Markers that reach the arrival threshold are frozen and keep
/// their arrival time.
struct BoundaryMarker {
    double x1 = 0.0;
    double omega0_value = 0.0;
    std::optional<double> arrival_time;
    std::vector<std::pair<double, double>> history;  // (time, x1)

    bool arrived() const { return arrival_time.has_value(); }
    PhysicalPoint position() const { return {x1, 0.0}; }
};

struct SimulationState {
    double time = 0.0;
    SectorDomain dom{kPi / 3.0};
    std::vector<VortexCell> cells;
    std::vector<BoundaryMarker> markers;
    double omega0_at_corner = 0.0;
    long step_count = 0;
    long projection_count = 0;

    double circulation() const {
        double s = 0.0;
        for (const VortexCell& c : cells) s += c.omega * c.area;
        return s;
    }
    std::pair<double, double> omega_range() const {
        double lo = cells.empty() ? 0.0 : cells.front().omega;
        double hi = lo;
        for (const VortexCell& c : cells) {
            lo = std::min(lo, c.omega);
            hi = std::max(hi, c.omega);
        }
        return {lo, hi};
    }
};

struct IntegrationError : std::runtime_error {
    explicit IntegrationError(const std::string& msg, std::size_t index)
        : std::runtime_error(msg), offending_index(index) {}
    std::size_t offending_index;
};

namespace detail {

// Stage velocities for the combined cell + marker ensemble at candidate
// positions.  Markers keep only the tangential component; frozen markers do
// not move.
inline std::vector<Vec2> stage_velocities(const SimulationState& base,
                                          const std::vector<PhysicalPoint>& pos,
                                          const QuadratureConfig& cfg_in, int workers) {
    // the integrator always runs on the smooth regularized kernel
    QuadratureConfig cfg = cfg_in;
    if (cfg.blob_factor <= 0.0) cfg.blob_factor = 1.0;
    const std::size_t nc = base.cells.size();
    std::vector<VortexCell> sources = base.cells;
    for (std::size_t i = 0; i < nc; ++i) {
        sources[i].position = base.dom.contains(pos[i], 0.0) ? pos[i] : base.dom.clamp(pos[i]);
    }
    std::vector<PhysicalPoint> pts(pos.size());
    for (std::size_t i = 0; i < nc; ++i) pts[i] = sources[i].position;
    for (std::size_t i = nc; i < pos.size(); ++i) {
        pts[i] = {std::clamp(pos[i].x1, 0.0, base.dom.radius()), 0.0};
    }
    std::vector<Vec2> u = velocity_batch(pts, sources, base.dom, cfg, workers);
    for (std::size_t i = 0; i < u.size(); ++i) {
        if (!std::isfinite(u[i].x) || !std::isfinite(u[i].y)) {
            throw IntegrationError("non-finite velocity at ensemble index " + std::to_string(i), i);
        }
        if (i >= nc) {
            u[i].y = 0.0;  // markers stay on the edge
            if (base.markers[i - nc].arrived()) u[i].x = 0.0;
        }
    }
    return u;
}

}  // namespace detail

/// One classical 4-stage step for all cells and markers.  Cells that step
/// outside the closed sector are projected back onto it and counted.
inline SimulationState rk4_step(const SimulationState& state, double dt,
                                const QuadratureConfig& cfg = {}, int workers = 0) {
    if (!(dt > 0.0)) throw std::invalid_argument("rk4_step: dt must be positive");
    const std::size_t nc = state.cells.size();
    const std::size_t n = nc + state.markers.size();

    std::vector<PhysicalPoint> p0(n);
    for (std::size_t i = 0; i < nc; ++i) p0[i] = state.cells[i].position;
    for (std::size_t i = nc; i < n; ++i) p0[i] = state.markers[i - nc].position();

    auto shifted = [&](const std::vector<Vec2>& k, double h) {
        std::vector<PhysicalPoint> p(n);
        for (std::size_t i = 0; i < n; ++i) p[i] = {p0[i].x1 + h * k[i].x, p0[i].x2 + h * k[i].y};
        return p;
    };

    const auto k1 = detail::stage_velocities(state, p0, cfg, workers);
    const auto k2 = detail::stage_velocities(state, shifted(k1, 0.5 * dt), cfg, workers);
    const auto k3 = detail::stage_velocities(state, shifted(k2, 0.5 * dt), cfg, workers);
    const auto k4 = detail::stage_velocities(state, shifted(k3, dt), cfg, workers);

    SimulationState next = state;
    next.time = state.time + dt;
    next.step_count = state.step_count + 1;
    const double w = dt / 6.0;
    for (std::size_t i = 0; i < nc; ++i) {
        PhysicalPoint p{p0[i].x1 + w * (k1[i].x + 2.0 * k2[i].x + 2.0 * k3[i].x + k4[i].x),
                        p0[i].x2 + w * (k1[i].y + 2.0 * k2[i].y + 2.0 * k3[i].y + k4[i].y)};
        if (!state.dom.contains(p, 0.0)) {
            p = state.dom.clamp(p);
            ++next.projection_count;
        }
        next.cells[i].position = p;
    }
    for (std::size_t i = nc; i < n; ++i) {
        BoundaryMarker& m = next.markers[i - nc];
        if (m.arrived()) continue;
        m.x1 = std::max(0.0, p0[i].x1 + w * (k1[i].x + 2.0 * k2[i].x + 2.0 * k3[i].x + k4[i].x));
    }
    return next;
}

/// Transported vorticity at a point by inverse-distance interpolation over
/// the k nearest cell centers.  The corner is a fixed point of the flow and
/// returns the initial corner value.
inline double vorticity_at(PhysicalPoint x, const SimulationState& state, int k = 4) {
    if (k < 1) throw std::invalid_argument("vorticity_at: k >= 1 required");
    if (radius_of(x) < 1e-300) return state.omega0_at_corner;
    const std::size_t n = state.cells.size();
    k = std::min<int>(k, static_cast<int>(n));
    // nearest-k by partial selection on squared distance
    std::vector<std::pair<double, std::size_t>> d(n);
    for (std::size_t j = 0; j < n; ++j) {
        const PhysicalPoint& p = state.cells[j].position;
        const double dx = p.x1 - x.x1, dy = p.x2 - x.x2;
        d[j] = {dx * dx + dy * dy, j};
    }
    std::partial_sort(d.begin(), d.begin() + k, d.end());
    if (d[0].first < 1e-30) return state.cells[d[0].second].omega;
    double num = 0.0, den = 0.0;
    for (int j = 0; j < k; ++j) {
        const double w = 1.0 / std::sqrt(d[j].first);
        num += w * state.cells[d[j].second].omega;
        den += w;
    }
    return num / den;
}

}  // namespace corner_euler
