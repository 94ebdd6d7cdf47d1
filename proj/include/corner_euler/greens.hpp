#pragma once

#include <random>
#include <vector>

#include "conformal.hpp"
#include "geometry.hpp"

namespace corner_euler {

/// Source point together with its three images in the half-disk construction:
/// Kelvin inversion y* = y/|y|^2 and the conjugate reflections.
struct ImageSet {
    MappedPoint y;
    MappedPoint y_star;
    MappedPoint y_conj;
    MappedPoint y_conj_star;
};

inline ImageSet make_images(MappedPoint y) {
    const double n2 = abs2(y);
    if (n2 < 1e-28) {
        throw std::domain_error("Green source at the corner image: Kelvin inversion undefined");
    }
    const MappedPoint ys{y.w1 / n2, y.w2 / n2};
    return {y, ys, {y.w1, -y.w2}, {ys.w1, -ys.w2}};
}

/// Split of the half-disk Green function into the log-ratio part (near) and
/// the Kelvin part (far); total carries the 1/(2*pi) normalization.
struct GreenParts {
    double g_near = 0.0;
    double g_far = 0.0;
    double total = 0.0;
};

/// Dirichlet Green function of the unit upper half-disk by four images.
inline GreenParts green_halfdisk(MappedPoint x, MappedPoint y) {
    const ImageSet img = make_images(y);
    const double d_y = distance(x, y);
    if (d_y < 1e-300) {
        throw std::domain_error("green_halfdisk: evaluation point coincides with the source");
    }
    const MappedPoint xc{x.w1, -x.w2};
    const double g_near = std::log(d_y) - std::log(distance(xc, y));
    const double g_far = std::log(distance(xc, img.y_star)) - std::log(distance(x, img.y_star));
    return {g_near, g_far, (g_near + g_far) / (2.0 * kPi)};
}

/// Gradient of green_halfdisk in the evaluation variable x.
inline Vec2 grad_green_halfdisk(MappedPoint x, MappedPoint y) {
    const double n2 = abs2(y);
    if (n2 < 1e-28) {
        throw std::domain_error("grad_green_halfdisk: source at the corner image");
    }
    const double ys1 = y.w1 / n2, ys2 = y.w2 / n2;
    const double a1 = x.w1 - y.w1, a2 = x.w2 - y.w2;      // x - y
    const double b1 = x.w1 - ys1, b2 = x.w2 - ys2;        // x - y*
    const double c1 = x.w1 - y.w1, c2 = -x.w2 - y.w2;     // conj(x) - y
    const double d1 = x.w1 - ys1, d2 = -x.w2 - ys2;       // conj(x) - y*
    const double A = a1 * a1 + a2 * a2;
    if (A < 1e-300) {
        throw std::domain_error("grad_green_halfdisk: evaluation point coincides with the source");
    }
    const double B = b1 * b1 + b2 * b2;
    const double C = c1 * c1 + c2 * c2;
    const double D = d1 * d1 + d2 * d2;
    const double g1 = a1 / A - b1 / B - c1 / C + d1 / D;
    const double g2 = a2 / A - b2 / B + c2 / C - d2 / D;
    return {g1 / (2.0 * kPi), g2 / (2.0 * kPi)};
}

/// Blob-regularized gradient: delta2 is added to every squared image
/// distance, which keeps the pairwise boundary cancellations on the straight
/// edges and makes the kernel smooth in both arguments.  Used by the time
/// integrator; the exact kernel above serves the static probes.
inline Vec2 grad_green_halfdisk_blob(MappedPoint x, MappedPoint y, double delta2) {
    const double n2 = abs2(y);
    if (n2 < 1e-28) {
        throw std::domain_error("grad_green_halfdisk_blob: source at the corner image");
    }
    const double ys1 = y.w1 / n2, ys2 = y.w2 / n2;
    const double a1 = x.w1 - y.w1, a2 = x.w2 - y.w2;
    const double b1 = x.w1 - ys1, b2 = x.w2 - ys2;
    const double c1 = x.w1 - y.w1, c2 = -x.w2 - y.w2;
    const double d1 = x.w1 - ys1, d2 = -x.w2 - ys2;
    const double A = a1 * a1 + a2 * a2 + delta2;
    const double B = b1 * b1 + b2 * b2 + delta2;
    const double C = c1 * c1 + c2 * c2 + delta2;
    const double D = d1 * d1 + d2 * d2 + delta2;
    const double g1 = a1 / A - b1 / B - c1 / C + d1 / D;
    const double g2 = a2 / A - b2 / B + c2 / C - d2 / D;
    return {g1 / (2.0 * kPi), g2 / (2.0 * kPi)};
}

/// Gradient of the pulled-back sector Green function G(x, y) = G_U(f(x), f(y))
/// in x, by the chain rule through the conformal map.
inline Vec2 grad_green_domain(PhysicalPoint x, PhysicalPoint y, const SectorDomain& dom) {
    const MappedPoint w = to_halfdisk(x, dom);
    const MappedPoint v = to_halfdisk(y, dom);
    const Vec2 g = grad_green_halfdisk(w, v);
    const MapDerivative md = map_derivative(x, dom);
    const double re = md.df.real(), im = md.df.imag();
    // J^T * grad with J = [[re, -im], [im, re]]
    return {re * g.x + im * g.y, -im * g.x + re * g.y};
}

/// Residual report for the half-disk formula: boundary vanishing, symmetry in
/// (x, y), and a 5-point finite-difference harmonicity check at two steps.
struct GreenSelftestReport {
    double boundary_residual = 0.0;
    double symmetry_residual = 0.0;
    double harmonicity_residual = 0.0;  // at step h
    double harmonicity_ratio = 0.0;     // residual(h) / residual(h/2), ~4 expected
    int samples = 0;
};

inline GreenSelftestReport green_selftest(const SectorDomain& dom, int samples,
                                          unsigned seed = 20240901u) {
    if (samples < 1) throw std::invalid_argument("green_selftest: samples >= 1 required");
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> unit(0.05, 0.95);
    std::uniform_real_distribution<double> angle(0.05, 0.95);

    auto interior = [&]() -> MappedPoint {
        // interior sector point, mapped
        const double r = dom.radius() * unit(rng);
        const double a = dom.theta() * angle(rng);
        return to_halfdisk({r * std::cos(a), r * std::sin(a)}, dom);
    };

    GreenSelftestReport rep;
    rep.samples = samples;
    const double h1 = 1e-3, h2 = 5e-4;
    double res_h1 = 0.0, res_h2 = 0.0;
    for (int i = 0; i < samples; ++i) {
        const MappedPoint y = interior();
        // boundary x: alternate diameter and arc
        MappedPoint xb;
        if (i % 2 == 0) {
            xb = {2.0 * unit(rng) - 1.0, 0.0};
        } else {
            const double phi = kPi * angle(rng);
            xb = {std::cos(phi), std::sin(phi)};
        }
        rep.boundary_residual =
            std::max(rep.boundary_residual, std::abs(green_halfdisk(xb, y).total));

        MappedPoint x = interior();
        if (distance(x, y) < 1e-3) continue;
        rep.symmetry_residual = std::max(
            rep.symmetry_residual, std::abs(green_halfdisk(x, y).total - green_halfdisk(y, x).total));

        if (distance(x, y) > 0.05 && x.w2 > 0.05 && std::sqrt(abs2(x)) < 0.9) {
            auto lap = [&](double h) {
                const double c = green_halfdisk(x, y).total;
                const double e = green_halfdisk({x.w1 + h, x.w2}, y).total;
                const double w = green_halfdisk({x.w1 - h, x.w2}, y).total;
                const double n = green_halfdisk({x.w1, x.w2 + h}, y).total;
                const double s = green_halfdisk({x.w1, x.w2 - h}, y).total;
                return std::abs(e + w + n + s - 4.0 * c) / (h * h);
            };
            res_h1 = std::max(res_h1, lap(h1));
            res_h2 = std::max(res_h2, lap(h2));
        }
    }
    rep.harmonicity_residual = res_h1;
    rep.harmonicity_ratio = res_h2 > 0.0 ? res_h1 / res_h2 : 0.0;
    return rep;
}

}  // namespace corner_euler
