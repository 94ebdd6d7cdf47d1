#pragma once

#include <cmath>
#include <limits>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "transport.hpp"

namespace corner_euler {

/// Time series of the corner Lipschitz quotient L(t).
struct GrowthSeries {
    std::vector<double> times;
    std::vector<double> values;
    std::string source;
};

enum class GrowthMode { exponential, double_exponential, finite_time, inconclusive };

inline std::string to_string(GrowthMode m) {
    switch (m) {
        case GrowthMode::exponential: return "exponential";
        case GrowthMode::double_exponential: return "double_exponential";
        case GrowthMode::finite_time: return "finite_time";
        case GrowthMode::inconclusive: return "inconclusive";
    }
    return "?";
}

struct GrowthClassification {
    GrowthMode mode = GrowthMode::inconclusive;
    double rate = 0.0;
    double r_squared = 0.0;
    double window_begin = 0.0;
    double window_end = 0.0;
};

/// Least-squares line fit with coefficient of determination.
struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r_squared = 0.0;
    int n = 0;
};

inline LineFit fit_line(std::span<const double> xs, std::span<const double> ys) {
    LineFit f;
    f.n = static_cast<int>(xs.size());
    if (f.n < 2) return f;
    double sx = 0, sy = 0;
    for (int i = 0; i < f.n; ++i) {
        sx += xs[i];
        sy += ys[i];
    }
    const double mx = sx / f.n, my = sy / f.n;
    double sxx = 0, sxy = 0, syy = 0;
    for (int i = 0; i < f.n; ++i) {
        const double dx = xs[i] - mx, dy = ys[i] - my;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    if (sxx <= 0.0) return f;
    f.slope = sxy / sxx;
    f.intercept = my - f.slope * mx;
    f.r_squared = syy > 0.0 ? (sxy * sxy) / (sxx * syy) : 1.0;
    return f;
}

/// Fixed interior probe set used by the Lipschitz quotient, deterministic
/// given the domain and seed.
inline std::vector<PhysicalPoint> probe_points(const SectorDomain& dom, int n = 24,
                                               unsigned seed = 1234u) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> ur(0.02, 0.9);
    std::uniform_real_distribution<double> ua(0.05, 0.95);
    std::vector<PhysicalPoint> pts;
    pts.reserve(n);
    for (int i = 0; i < n; ++i) {
        const double r = dom.radius() * ur(rng);
        const double a = dom.theta() * ua(rng);
        pts.push_back({r * std::cos(a), r * std::sin(a)});
    }
    return pts;
}

/// Corner Lipschitz quotient: the marker lower bound |w0(X) - w0(0)| / x1(t)
/// combined with a probe-point estimate of sup |w(x,t) - w(0,t)| / |x|.
/// A marker sitting at the corner makes the quotient +infinity (arrival).
inline double lipschitz_quotient(const SimulationState& state,
                                 std::span<const PhysicalPoint> probes = {}, int k = 4) {
    double L = 0.0;
    bool any_marker = false;
    for (const BoundaryMarker& m : state.markers) {
        const double num = std::abs(m.omega0_value - state.omega0_at_corner);
        if (num == 0.0) continue;
        any_marker = true;
        if (m.x1 <= 0.0 || m.arrived()) return std::numeric_limits<double>::infinity();
        L = std::max(L, num / m.x1);
    }
    if (!any_marker && probes.empty()) {
        throw std::invalid_argument("lipschitz_quotient: no marker with omega0 != corner value");
    }
    for (const PhysicalPoint& p : probes) {
        const double r = radius_of(p);
        if (r <= 0.0) continue;
        L = std::max(L, std::abs(vorticity_at(p, state, k) - state.omega0_at_corner) / r);
    }
    return L;
}

/// Slopes of log L over equal-time windows; the increasing-slope signature
/// separates super-exponential growth from a plain exponential.  Pass
/// trailing < 1 to restrict to the trailing fraction of the time span and
/// skip initial transients, matching the classify_growth convention.
inline std::vector<double> windowed_slopes(const GrowthSeries& s, int nwindows,
                                           double trailing = 1.0) {
    std::vector<double> slopes;
    if (s.times.empty() || nwindows < 1) return slopes;
    const double t1 = s.times.back();
    const double t0 = t1 - trailing * (t1 - s.times.front());
    const double w = (t1 - t0) / nwindows;
    for (int k = 0; k < nwindows; ++k) {
        std::vector<double> ts, ls;
        for (std::size_t i = 0; i < s.times.size(); ++i) {
            const double t = s.times[i];
            if (t >= t0 + k * w - 1e-12 && t <= t0 + (k + 1) * w + 1e-12 &&
                std::isfinite(s.values[i]) && s.values[i] > 0.0) {
                ts.push_back(t);
                ls.push_back(std::log(s.values[i]));
            }
        }
        if (ts.size() >= 2) slopes.push_back(fit_line(ts, ls).slope);
    }
    return slopes;
}

inline bool has_increasing_run(std::span<const double> v, int run) {
    int best = 1;
    for (std::size_t i = 1; i < v.size(); ++i) {
        best = v[i] > v[i - 1] ? best + 1 : 1;
        if (best >= run) return true;
    }
    return run <= 1 && !v.empty();
}

/// Classify a growth series by competing fits of log L and log log L against
/// t on the trailing 60% window.  finite_time wins outright when the
/// underlying marker reached the corner.
inline GrowthClassification classify_growth(const GrowthSeries& s, bool arrival = false) {
    GrowthClassification c;
    if (arrival) {
        c.mode = GrowthMode::finite_time;
        c.r_squared = 1.0;
        if (!s.times.empty()) {
            c.window_begin = s.times.front();
            c.window_end = s.times.back();
        }
        return c;
    }
    std::vector<double> ts, ls;
    for (std::size_t i = 0; i < s.times.size(); ++i) {
        if (std::isfinite(s.values[i]) && s.values[i] > 0.0) {
            ts.push_back(s.times[i]);
            ls.push_back(s.values[i]);
        }
    }
    const std::size_t n = ts.size();
    if (n < 10) return c;
    double lo = ls[0], hi = ls[0];
    for (double v : ls) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    if (!(hi / lo >= std::exp(1.0))) return c;  // needs a factor e of dynamic range

    const std::size_t first = n - static_cast<std::size_t>(std::ceil(0.6 * n));
    std::vector<double> wt(ts.begin() + first, ts.end());
    std::vector<double> wlog, wloglog, wt2;
    for (std::size_t i = first; i < n; ++i) {
        wlog.push_back(std::log(ls[i]));
        if (ls[i] > 1.000001) {
            wt2.push_back(ts[i]);
            wloglog.push_back(std::log(std::log(ls[i])));
        }
    }
    c.window_begin = wt.front();
    c.window_end = wt.back();

    const LineFit fe = fit_line(wt, wlog);
    LineFit fd;
    if (wt2.size() >= wt.size() * 4 / 5 && wt2.size() >= 5) fd = fit_line(wt2, wloglog);

    const bool pick_double = fd.n >= 2 && fd.r_squared > fe.r_squared && fd.slope > 0.0;
    const LineFit& best = pick_double ? fd : fe;
    if (best.r_squared >= 0.98 && best.slope > 0.0) {
        c.mode = pick_double ? GrowthMode::double_exponential : GrowthMode::exponential;
        c.rate = best.slope;
        c.r_squared = best.r_squared;
    } else {
        c.rate = best.slope;
        c.r_squared = best.r_squared;
    }
    return c;
}

enum class ProbeDirection { edge, bisector };

struct ExponentFit {
    double slope = 0.0;
    double r_squared = 0.0;
    int points_used = 0;
    double compensated_min = 0.0;  // range of |u| / (r log 1/r)
    double compensated_max = 0.0;
    std::vector<double> radii;
    std::vector<double> speeds;
};

/// Fit of log |u| against log r along a ray from the corner, with the
/// compensated ratio for the marginal exponent beta = 2.
inline ExponentFit velocity_exponent_probe(const SectorDomain& dom,
                                           std::span<const VortexCell> cells,
                                           std::span<const double> radii, ProbeDirection dir,
                                           const QuadratureConfig& cfg = {}) {
    const double a = dir == ProbeDirection::edge ? 0.0 : dom.theta() / 2.0;
    std::vector<double> lr, lu;
    ExponentFit out;
    out.compensated_min = std::numeric_limits<double>::infinity();
    for (double r : radii) {
        const PhysicalPoint x{r * std::cos(a), r * std::sin(a)};
        const Vec2 u = velocity_at(x, cells, dom, cfg);
        const double s = std::hypot(u.x, u.y);
        if (!(s > 1e-300)) continue;
        out.radii.push_back(r);
        out.speeds.push_back(s);
        lr.push_back(std::log(r));
        lu.push_back(std::log(s));
        const double comp = s / (r * std::log(1.0 / r));
        out.compensated_min = std::min(out.compensated_min, comp);
        out.compensated_max = std::max(out.compensated_max, comp);
    }
    if (lr.size() < 4) {
        throw std::runtime_error("velocity_exponent_probe: fewer than 4 usable probe points");
    }
    const LineFit f = fit_line(lr, lu);
    out.slope = f.slope;
    out.r_squared = f.r_squared;
    out.points_used = f.n;
    return out;
}

/// First time the marker distance drops below the threshold, linearly
/// interpolated inside the crossing interval.
inline std::optional<double> arrival_time(const std::vector<std::pair<double, double>>& history,
                                          double threshold) {
    for (std::size_t i = 0; i < history.size(); ++i) {
        if (history[i].second < threshold) {
            if (i == 0) return history[0].first;
            const auto [t0, x0] = history[i - 1];
            const auto [t1, x1] = history[i];
            if (x0 <= x1) return t1;
            const double f = (x0 - threshold) / (x0 - x1);
            return t0 + f * (t1 - t0);
        }
    }
    return std::nullopt;
}

/// Fitted exponent p of T ~ X1^p across a marker ladder.
inline double fit_arrival_exponent(std::span<const double> x1_starts,
                                   std::span<const double> times) {
    if (x1_starts.size() != times.size() || x1_starts.size() < 2) {
        throw std::invalid_argument("fit_arrival_exponent: need matched ladders of size >= 2");
    }
    std::vector<double> lx, lt;
    for (std::size_t i = 0; i < times.size(); ++i) {
        lx.push_back(std::log(x1_starts[i]));
        lt.push_back(std::log(times[i]));
    }
    return fit_line(lx, lt).slope;
}

struct ContinuityModulus {
    double exponent = 0.0;  // fitted Hoelder exponent alpha(t)
    std::vector<double> scales;
    std::vector<double> max_diffs;
};

/// Measured modulus of continuity: max vorticity difference over point pairs
/// at separation s in the near-corner region, fitted as s^alpha.
inline ContinuityModulus continuity_modulus(const SimulationState& state,
                                            std::span<const double> pair_scales, int k = 4) {
    const SectorDomain& dom = state.dom;
    ContinuityModulus out;
    std::vector<double> ls, ld;
    for (double s : pair_scales) {
        double dmax = 0.0;
        for (double rho : {0.1, 0.2, 0.35}) {
            for (double frac : {0.25, 0.5, 0.75}) {
                const double a = frac * dom.theta();
                const PhysicalPoint base{rho * dom.radius() * std::cos(a),
                                         rho * dom.radius() * std::sin(a)};
                const double w0 = vorticity_at(base, state, k);
                for (double dir : {0.0, 0.5 * kPi, a + 0.5 * kPi}) {
                    const PhysicalPoint q =
                        dom.clamp({base.x1 + s * std::cos(dir), base.x2 + s * std::sin(dir)});
                    if (distance(base, q) < 0.5 * s) continue;
                    dmax = std::max(dmax,
                                    std::abs(vorticity_at(q, state, k) - w0) / (distance(base, q) / s));
                }
            }
        }
        if (dmax > 0.0) {
            out.scales.push_back(s);
            out.max_diffs.push_back(dmax);
            ls.push_back(std::log(s));
            ld.push_back(std::log(dmax));
        }
    }
    if (ls.size() >= 2) out.exponent = fit_line(ls, ld).slope;
    return out;
}

/// Discontinuity witness at the corner: max vorticity difference over pairs
/// straddling the corner at separation scale s (including the corner itself,
/// which keeps its initial value for all time).
inline std::vector<double> corner_jump_witness(const SimulationState& state,
                                               std::span<const double> scales, int k = 4) {
    const SectorDomain& dom = state.dom;
    std::vector<double> out;
    for (double s : scales) {
        double dmax = 0.0;
        std::vector<PhysicalPoint> ring;
        for (double frac : {0.05, 0.25, 0.5, 0.75, 0.95}) {
            const double a = frac * dom.theta();
            ring.push_back({s * std::cos(a), s * std::sin(a)});
        }
        const double wc = vorticity_at({0.0, 0.0}, state, k);
        for (const PhysicalPoint& p : ring) {
            dmax = std::max(dmax, std::abs(vorticity_at(p, state, k) - wc));
        }
        for (std::size_t i = 0; i < ring.size(); ++i) {
            for (std::size_t j = i + 1; j < ring.size(); ++j) {
                dmax = std::max(dmax, std::abs(vorticity_at(ring[i], state, k) -
                                               vorticity_at(ring[j], state, k)));
            }
        }
        out.push_back(dmax);
    }
    return out;
}

}  // namespace corner_euler
