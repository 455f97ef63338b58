#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "semdnav/geometry.hpp"

namespace semdnav::vision {

/// Planar surface covered with a vertical square-wave grating. The grating
/// coordinate runs from segment.a towards segment.b.
struct SceneSurface {
    Segment segment;
    double period_m = 0.2;
    double phase = 0.0;  // [0, 1)
    double bright = 1.0;
    double dark = 0.0;

    /// Square wave with 50% duty cycle: bright on the first half of each period.
    double brightness_at(double along_m) const;
    /// Exact mean of the square wave over [a, b] (either order).
    double mean_brightness(double a_m, double b_m) const;
};

struct SurfaceHit {
    std::uint32_t surface;
    double distance;
    double along;
};

/// Surfaces plus a uniform-grid index for raycasting.
class Scene {
public:
    Scene() = default;
    explicit Scene(std::vector<SceneSurface> surfaces, double cell_m = 1.0);

    const std::vector<SceneSurface>& surfaces() const noexcept { return surfaces_; }
    bool empty() const noexcept { return surfaces_.empty(); }

    /// Nearest surface hit by the ray, if any; dir must be a unit vector.
    std::optional<SurfaceHit> cast(Vec2 origin, Vec2 dir) const;

private:
    std::optional<SurfaceHit> cast_brute(Vec2 origin, Vec2 dir) const;
    void consider(std::uint32_t idx, Vec2 origin, Vec2 dir, std::optional<SurfaceHit>& best) const;

    std::vector<SceneSurface> surfaces_;
    double cell_ = 1.0;
    Vec2 lo_, hi_;
    int nx_ = 0, ny_ = 0;
    std::vector<std::uint32_t> cell_begin_;
    std::vector<std::uint32_t> cell_items_;
};

}  // namespace semdnav::vision
