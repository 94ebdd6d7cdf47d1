#pragma once

#include <array>
#include <complex>

#include "geometry.hpp"

namespace corner_euler {

/// Angle of z measured inside the closed sector.  Throws when the point lies
/// outside it beyond a small arc-length tolerance; values that round off just
/// past an edge are snapped onto it.
inline double sector_arg(PhysicalPoint z, const SectorDomain& dom) {
    const double r = radius_of(z);
    double a = polar_angle(z);
    if (a > dom.theta()) {
        const double tol = 1e-9;
        if ((2.0 * kPi - a) * r <= tol) return 0.0;
        if ((a - dom.theta()) * r <= tol) return dom.theta();
        throw std::domain_error("point outside the closed sector: arg = " + std::to_string(a) +
                                " exceeds theta = " + std::to_string(dom.theta()) +
                                " at (" + std::to_string(z.x1) + ", " + std::to_string(z.x2) + ")");
    }
    return a;
}

/// f(z) = (z/R)^beta with the principal branch on arg in [0, theta].  Maps the
/// sector onto the closed unit upper half-disk; the corner goes to the origin,
/// the edge arg = 0 onto [0, 1], the edge arg = theta onto [-1, 0].
inline MappedPoint to_halfdisk(PhysicalPoint z, const SectorDomain& dom) {
    const double r = radius_of(z);
    if (r == 0.0) return {0.0, 0.0};
    const double a = sector_arg(z, dom);
    if (r > dom.radius() * (1.0 + 1e-12) + 1e-12) {
        throw std::domain_error("point outside the closed sector: |z| = " + std::to_string(r) +
                                " exceeds R = " + std::to_string(dom.radius()));
    }
    double rho = std::pow(std::min(r, dom.radius()) / dom.radius(), dom.beta());
    const double phi = dom.beta() * a;
    return {rho * std::cos(phi), rho * std::sin(phi)};
}

/// g(w) = R * w^{1/beta}, principal branch on arg in [0, pi].  Inverse of
/// to_halfdisk on the closed half-disk.
inline PhysicalPoint from_halfdisk(MappedPoint w, const SectorDomain& dom) {
    const double rho = std::sqrt(abs2(w));
    if (w.w2 < -1e-12 || rho > 1.0 + 1e-12) {
        throw std::domain_error("point outside the closed upper half-disk: (" +
                                std::to_string(w.w1) + ", " + std::to_string(w.w2) + ")");
    }
    if (rho == 0.0) return {0.0, 0.0};
    double phi = std::atan2(std::max(w.w2, 0.0), w.w1);
    const double r = dom.radius() * std::pow(std::min(rho, 1.0), 1.0 / dom.beta());
    const double a = phi / dom.beta();
    return {r * std::cos(a), r * std::sin(a)};
}

/// Complex derivative f'(z) = (beta/R)(z/R)^{beta-1} and the real 2x2
/// Jacobian [[Re f', -Im f'], [Im f', Re f']] from the Cauchy-Riemann
/// relations.
struct MapDerivative {
    std::complex<double> df;
    std::array<std::array<double, 2>, 2> jacobian;
};

inline MapDerivative map_derivative(PhysicalPoint z, const SectorDomain& dom) {
    const double beta = dom.beta();
    const double r = radius_of(z);
    if (r == 0.0) {
        if (beta < 1.0) {
            throw std::domain_error("map_derivative: singular at the corner for beta < 1");
        }
        return {std::complex<double>{0.0, 0.0}, {{{0.0, 0.0}, {0.0, 0.0}}}};
    }
    const double a = sector_arg(z, dom);
    const double mag = (beta / dom.radius()) * std::pow(r / dom.radius(), beta - 1.0);
    const double ang = (beta - 1.0) * a;
    const double re = mag * std::cos(ang);
    const double im = mag * std::sin(ang);
    return {std::complex<double>{re, im}, {{{re, -im}, {im, re}}}};
}

}  // namespace corner_euler
