#pragma once

#include <functional>
#include <string>
#include <vector>

#include "transport.hpp"

namespace corner_euler {

/// The four initial-data constructions, one per growth regime.
enum class ScenarioKind {
    A_abs_plus_one,    // |x| + 1, theta <= pi/2: single-exponential regime
    B_capped_ramp,     // min(|x|/eps + 1, 2), theta = pi/2: super-exponential
    C_abs,             // |x|, pi/2 < theta < pi: finite-time loss of continuity
    D_odd_reflection,  // x1 on a reflex sector, run on the half-sector
};

inline std::string to_string(ScenarioKind k) {
    switch (k) {
        case ScenarioKind::A_abs_plus_one: return "A";
        case ScenarioKind::B_capped_ramp: return "B";
        case ScenarioKind::C_abs: return "C";
        case ScenarioKind::D_odd_reflection: return "D";
    }
    return "?";
}

inline ScenarioKind scenario_kind_from_string(const std::string& s) {
    if (s == "A" || s == "A_abs_plus_one") return ScenarioKind::A_abs_plus_one;
    if (s == "B" || s == "B_capped_ramp") return ScenarioKind::B_capped_ramp;
    if (s == "C" || s == "C_abs") return ScenarioKind::C_abs;
    if (s == "D" || s == "D_odd_reflection") return ScenarioKind::D_odd_reflection;
    throw ConfigError("unknown scenario kind: " + s);
}

struct ScenarioSpec {
    ScenarioKind kind = ScenarioKind::A_abs_plus_one;
    double theta = kPi / 3.0;
    double epsilon = 0.05;  // ramp width, kind B only
    int n_r = 32;
    int n_phi = 32;
    std::vector<double> marker_starts;  // absolute x1 values; empty = default ladder
    double radius = SectorDomain::kDefaultRadius;

    /// Angle-specific hypothesis gates; each regime's construction is only
    /// valid in its angle range.
    void validate() const {
        switch (kind) {
            case ScenarioKind::A_abs_plus_one:
                if (!(theta > 0.0 && theta <= kPi / 2.0))
                    throw ConfigError("kind A requires 0 < theta <= pi/2");
                break;
            case ScenarioKind::B_capped_ramp:
                if (!(theta > 0.0 && theta <= kPi / 2.0))
                    throw ConfigError("kind B requires 0 < theta <= pi/2");
                if (!(epsilon > 0.0 && epsilon < 0.2 * radius))
                    throw ConfigError("kind B requires 0 < epsilon < 0.2*R");
                break;
            case ScenarioKind::C_abs:
                if (!(theta > kPi / 2.0 && theta < kPi))
                    throw ConfigError("kind C requires pi/2 < theta < pi");
                break;
            case ScenarioKind::D_odd_reflection:
                if (!(theta > kPi && theta < 2.0 * kPi))
                    throw ConfigError("kind D requires pi < theta < 2*pi");
                break;
        }
        if (n_r < 1 || n_phi < 1) throw ConfigError("mesh resolution must be >= 1");
    }
};

/// The domain the time integration actually runs on.  Kind D reduces the
/// reflex sector to its half of angle theta/2; everything else runs on the
/// full sector.
inline SectorDomain simulation_domain(const ScenarioSpec& spec) {
    spec.validate();
    const double th = spec.kind == ScenarioKind::D_odd_reflection ? spec.theta / 2.0 : spec.theta;
    return SectorDomain(th, spec.radius);
}

/// Closed-form initial vorticity.  For kind D the value is the first
/// coordinate in the paper's rotated frame (symmetry axis vertical), which in
/// the half-sector frame used here reads |x| cos(arg x + (pi - theta)/2); it
/// is positive inside the half-sector and vanishes on the reflex bisector.
inline std::function<double(PhysicalPoint)> make_initial_vorticity(const ScenarioSpec& spec) {
    spec.validate();
    switch (spec.kind) {
        case ScenarioKind::A_abs_plus_one:
            return [](PhysicalPoint x) { return radius_of(x) + 1.0; };
        case ScenarioKind::B_capped_ramp: {
            const double eps = spec.epsilon;
            return [eps](PhysicalPoint x) { return std::min(radius_of(x) / eps + 1.0, 2.0); };
        }
        case ScenarioKind::C_abs:
            return [](PhysicalPoint x) { return radius_of(x); };
        case ScenarioKind::D_odd_reflection: {
            const double shift = (kPi - spec.theta) / 2.0;
            return [shift](PhysicalPoint x) {
                const double r = radius_of(x);
                return r == 0.0 ? 0.0 : r * std::cos(polar_angle(x) + shift);
            };
        }
    }
    throw ConfigError("unreachable scenario kind");
}

/// Polar tensor mesh over the sector.  Radial breakpoints follow the power
/// law r_i = R (i/n)^grading, which concentrates layers at the corner (where
/// the velocity laws live) while keeping the outer cells at O(R/n); cell
/// centers use the area-exact radius sqrt((r_i^2 + r_{i+1}^2)/2).
inline std::vector<VortexCell> build_cells(const SectorDomain& dom, int n_r, int n_phi,
                                           const std::function<double(PhysicalPoint)>& omega0,
                                           double grading = 4.0) {
    if (n_r < 1 || n_phi < 1) throw std::invalid_argument("build_cells: resolution >= 1");
    std::vector<double> rb(n_r + 1);
    for (int i = 0; i <= n_r; ++i) {
        rb[i] = dom.radius() * std::pow(static_cast<double>(i) / n_r, grading);
    }
    const double dphi = dom.theta() / n_phi;
    std::vector<VortexCell> cells;
    cells.reserve(static_cast<std::size_t>(n_r) * n_phi);
    for (int i = 0; i < n_r; ++i) {
        for (int j = 0; j < n_phi; ++j) {
            const CellFootprint fp{rb[i], rb[i + 1], j * dphi, (j + 1) * dphi};
            const PhysicalPoint p = fp.center();
            cells.push_back({p, omega0(p), fp.area(), p, fp});
        }
    }
    return cells;
}

/// Default marker ladder on the edge arg = 0: geometric in x1 for
/// arrival-time scaling fits.
inline std::vector<double> default_marker_ladder(const SectorDomain& dom) {
    return {0.02 * dom.radius(), 0.04 * dom.radius(), 0.08 * dom.radius(), 0.16 * dom.radius()};
}

/// Fully initialized state for a scenario.
inline SimulationState make_initial_state(const ScenarioSpec& spec) {
    spec.validate();
    SimulationState st;
    st.dom = simulation_domain(spec);
    const auto omega0 = make_initial_vorticity(spec);
    st.cells = build_cells(st.dom, spec.n_r, spec.n_phi, omega0);
    st.omega0_at_corner = omega0({0.0, 0.0});
    const std::vector<double> starts =
        spec.marker_starts.empty() ? default_marker_ladder(st.dom) : spec.marker_starts;
    for (double x1 : starts) {
        BoundaryMarker m;
        m.x1 = x1;
        m.omega0_value = omega0({x1, 0.0});
        m.history.emplace_back(0.0, x1);
        st.markers.push_back(std::move(m));
    }
    return st;
}

/// Odd reflection across the sector bisector: the extension of a half-sector
/// field to the symmetric full sector, vanishing on the axis.
inline std::function<double(PhysicalPoint)> odd_extend(
    const std::function<double(PhysicalPoint)>& half_field, const SectorDomain& full_dom) {
    const double theta = full_dom.theta();
    return [half_field, theta](PhysicalPoint x) {
        const double r = radius_of(x);
        if (r == 0.0) return 0.0;
        const double a = polar_angle(x);
        const double axis = theta / 2.0;
        if (std::abs(a - axis) * r < 1e-15) return 0.0;
        if (a <= axis) return half_field(x);
        const double am = theta - a;  // mirror across the bisector
        return -half_field({r * std::cos(am), r * std::sin(am)});
    };
}

}  // namespace corner_euler
