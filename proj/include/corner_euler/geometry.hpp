#pragma once

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace corner_euler {

inline constexpr double kPi = std::numbers::pi;

/// Point in the sector (physical) plane.
struct PhysicalPoint {
    double x1 = 0.0;
    double x2 = 0.0;
};

/// Point in the closed unit upper half-disk.
struct MappedPoint {
    double w1 = 0.0;
    double w2 = 0.0;
};

/// Velocity or gradient vector.
struct Vec2 {
    double x = 0.0;
    double y = 0.0;
};

inline double radius_of(PhysicalPoint p) { return std::hypot(p.x1, p.x2); }
inline double abs2(MappedPoint p) { return p.w1 * p.w1 + p.w2 * p.w2; }

inline double distance(PhysicalPoint a, PhysicalPoint b) {
    return std::hypot(a.x1 - b.x1, a.x2 - b.x2);
}
inline double distance(MappedPoint a, MappedPoint b) {
    return std::hypot(a.w1 - b.w1, a.w2 - b.w2);
}

/// Angle from the edge arg = 0, wrapped into [0, 2*pi).
inline double polar_angle(PhysicalPoint p) {
    double a = std::atan2(p.x2, p.x1);
    if (a < 0.0) a += 2.0 * kPi;
    return a;
}

/// Circular sector {0 < arg z < theta, |z| < radius} with the corner at the
/// origin.  The angle exponent beta = pi/theta is always recomputed from
/// theta, never stored.
class SectorDomain {
  public:
    static constexpr double kDefaultRadius = 0.49;

    explicit SectorDomain(double theta, double radius = kDefaultRadius)
        : theta_(theta), radius_(radius) {
        if (!(theta > 0.0) || !(theta < 2.0 * kPi) || theta == kPi) {
            throw std::invalid_argument(
                "SectorDomain: angle must lie in (0, 2*pi) and differ from pi, got " +
                std::to_string(theta));
        }
        if (!(radius > 0.0) || !(2.0 * radius <= 1.0)) {
            throw std::invalid_argument(
                "SectorDomain: need 0 < 2*radius < 1 (unit-diameter normalization), got " +
                std::to_string(radius));
        }
    }

    double theta() const { return theta_; }
    double radius() const { return radius_; }
    double beta() const { return kPi / theta_; }

    /// Membership in the closed sector, with an absolute arc-length tolerance
    /// for points that round off just past an edge.
    bool contains(PhysicalPoint p, double tol = 1e-9) const {
        const double r = radius_of(p);
        if (r <= tol) return true;
        if (r > radius_ + tol) return false;
        const double a = polar_angle(p);
        if (a <= theta_) return true;
        const double off = std::min(a - theta_, 2.0 * kPi - a);
        return off * r <= tol;
    }

    /// Nearest point of the closed sector in polar coordinates (radius and
    /// angle clamped independently).
    PhysicalPoint clamp(PhysicalPoint p) const {
        double r = radius_of(p);
        if (r == 0.0) return {0.0, 0.0};
        double a = polar_angle(p);
        if (a > theta_) a = (a - theta_ < 2.0 * kPi - a) ? theta_ : 0.0;
        if (r > radius_) r = radius_;
        return {r * std::cos(a), r * std::sin(a)};
    }

  private:
    double theta_;
    double radius_;
};

/// Configuration errors (scenario gates, CLI input).
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace corner_euler
