#pragma once

#include <cmath>
#include <optional>

namespace semdnav {

inline constexpr double kPi = 3.14159265358979323846;

inline double deg_to_rad(double d) { return d * kPi / 180.0; }
inline double rad_to_deg(double r) { return r * 180.0 / kPi; }

/// Wraps to (-pi, pi].
inline double wrap_angle(double a)
{
    a = std::remainder(a, 2.0 * kPi);
    return a <= -kPi ? a + 2.0 * kPi : a;
}

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    Vec2 operator+(Vec2 o) const { return {x + o.x, y + o.y}; }
    Vec2 operator-(Vec2 o) const { return {x - o.x, y - o.y}; }
    Vec2 operator*(double s) const { return {x * s, y * s}; }
    friend bool operator==(const Vec2&, const Vec2&) = default;
};

inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
inline double norm(Vec2 a) { return std::hypot(a.x, a.y); }
inline Vec2 unit_vector(double angle) { return {std::cos(angle), std::sin(angle)}; }

struct Segment {
    Vec2 a;
    Vec2 b;
    double length() const { return norm(b - a); }
};

struct RayHit {
    double distance;  // along the unit ray direction
    double along;     // distance from segment.a to the hit point
};

/// Nearest intersection of the ray origin + t*dir (t >= 0, dir unit) with a
/// segment; parallel rays never hit.
inline std::optional<RayHit> intersect_ray(Vec2 origin, Vec2 dir, const Segment& s)
{
    const Vec2 e = s.b - s.a;
    const double den = cross(dir, e);
    if (std::abs(den) < 1e-15) return std::nullopt;
    const Vec2 w = s.a - origin;
    const double t = cross(w, e) / den;
    const double u = cross(w, dir) / den;
    if (t < 0.0 || u < 0.0 || u > 1.0) return std::nullopt;
    return RayHit{t, u * norm(e)};
}

}  // namespace semdnav
