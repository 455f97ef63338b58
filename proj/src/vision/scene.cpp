#include "semdnav/vision/scene.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "semdnav/errors.hpp"

namespace semdnav::vision {

double SceneSurface::brightness_at(double along_m) const
{
    double u = along_m / period_m + phase;
    u -= std::floor(u);
    return u < 0.5 ? bright : dark;
}

double SceneSurface::mean_brightness(double a_m, double b_m) const
{
    if (a_m > b_m) std::swap(a_m, b_m);
    const double span = (b_m - a_m) / period_m;
    if (span < 1e-12) return brightness_at(0.5 * (a_m + b_m));
    // Bright fraction via the running integral of the duty cycle.
    auto bright_cycles = [this](double along) {
        const double u = along / period_m + phase;
        const double whole = std::floor(u);
        return 0.5 * whole + std::min(u - whole, 0.5);
    };
    const double frac = (bright_cycles(b_m) - bright_cycles(a_m)) / span;
    return dark + (bright - dark) * std::clamp(frac, 0.0, 1.0);
}

Scene::Scene(std::vector<SceneSurface> surfaces, double cell_m) : surfaces_(std::move(surfaces)), cell_(cell_m)
{
    if (!(cell_m > 0)) throw ConfigError("scene: index cell size must be > 0");
    for (const auto& s : surfaces_) {
        if (!(s.period_m > 0)) throw ConfigError("scene: grating period must be > 0");
        if (!(s.bright >= s.dark)) throw ConfigError("scene: bright level below dark level");
    }
    if (surfaces_.empty()) return;
    lo_ = {std::numeric_limits<double>::max(), std::numeric_limits<double>::max()};
    hi_ = {std::numeric_limits<double>::lowest(), std::numeric_limits<double>::lowest()};
    for (const auto& s : surfaces_) {
        lo_ = {std::min({lo_.x, s.segment.a.x, s.segment.b.x}), std::min({lo_.y, s.segment.a.y, s.segment.b.y})};
        hi_ = {std::max({hi_.x, s.segment.a.x, s.segment.b.x}), std::max({hi_.y, s.segment.a.y, s.segment.b.y})};
    }
    lo_ = lo_ - Vec2{cell_, cell_};
    hi_ = hi_ + Vec2{cell_, cell_};
    nx_ = static_cast<int>(std::ceil((hi_.x - lo_.x) / cell_));
    ny_ = static_cast<int>(std::ceil((hi_.y - lo_.y) / cell_));

    auto cells_of = [&](const Segment& sg, auto&& fn) {
        const int x0 = static_cast<int>(std::floor((std::min(sg.a.x, sg.b.x) - lo_.x) / cell_));
        const int x1 = static_cast<int>(std::floor((std::max(sg.a.x, sg.b.x) - lo_.x) / cell_));
        const int y0 = static_cast<int>(std::floor((std::min(sg.a.y, sg.b.y) - lo_.y) / cell_));
        const int y1 = static_cast<int>(std::floor((std::max(sg.a.y, sg.b.y) - lo_.y) / cell_));
        for (int y = std::max(0, y0 - 1); y <= std::min(ny_ - 1, y1 + 1); ++y)
            for (int x = std::max(0, x0 - 1); x <= std::min(nx_ - 1, x1 + 1); ++x) fn(y * nx_ + x);
    };
    cell_begin_.assign(static_cast<std::size_t>(nx_) * ny_ + 1, 0);
    for (const auto& s : surfaces_) cells_of(s.segment, [&](int c) { ++cell_begin_[c + 1]; });
    for (std::size_t c = 1; c < cell_begin_.size(); ++c) cell_begin_[c] += cell_begin_[c - 1];
    cell_items_.resize(cell_begin_.back());
    std::vector<std::uint32_t> fill(cell_begin_.begin(), cell_begin_.end() - 1);
    for (std::uint32_t i = 0; i < surfaces_.size(); ++i)
        cells_of(surfaces_[i].segment, [&](int c) { cell_items_[fill[c]++] = i; });
}

void Scene::consider(std::uint32_t idx, Vec2 origin, Vec2 dir, std::optional<SurfaceHit>& best) const
{
    const auto h = intersect_ray(origin, dir, surfaces_[idx].segment);
    if (!h) return;
    // ties go to the lower surface index so results do not depend on traversal order
    if (!best || h->distance < best->distance || (h->distance == best->distance && idx < best->surface))
        best = SurfaceHit{idx, h->distance, h->along};
}

std::optional<SurfaceHit> Scene::cast_brute(Vec2 origin, Vec2 dir) const
{
    std::optional<SurfaceHit> best;
    for (std::uint32_t i = 0; i < surfaces_.size(); ++i) consider(i, origin, dir, best);
    return best;
}

std::optional<SurfaceHit> Scene::cast(Vec2 origin, Vec2 dir) const
{
    if (surfaces_.empty()) return std::nullopt;
    if (origin.x <= lo_.x || origin.y <= lo_.y || origin.x >= hi_.x || origin.y >= hi_.y)
        return cast_brute(origin, dir);

    // Grid traversal; a hit found in one cell is final once the ray leaves
    // that cell beyond the hit distance.
    int cx = static_cast<int>((origin.x - lo_.x) / cell_);
    int cy = static_cast<int>((origin.y - lo_.y) / cell_);
    const int sx = dir.x > 0 ? 1 : -1;
    const int sy = dir.y > 0 ? 1 : -1;
    const double inf = std::numeric_limits<double>::infinity();
    const double dtx = dir.x != 0 ? cell_ / std::abs(dir.x) : inf;
    const double dty = dir.y != 0 ? cell_ / std::abs(dir.y) : inf;
    double tx = dir.x != 0 ? ((lo_.x + (cx + (sx > 0)) * cell_) - origin.x) / dir.x : inf;
    double ty = dir.y != 0 ? ((lo_.y + (cy + (sy > 0)) * cell_) - origin.y) / dir.y : inf;

    std::optional<SurfaceHit> best;
    while (cx >= 0 && cy >= 0 && cx < nx_ && cy < ny_) {
        const int c = cy * nx_ + cx;
        for (std::uint32_t k = cell_begin_[c]; k < cell_begin_[c + 1]; ++k) consider(cell_items_[k], origin, dir, best);
        const double t_exit = std::min(tx, ty);
        if (best && best->distance <= t_exit) return best;
        if (tx < ty) {
            cx += sx;
            tx += dtx;
        } else {
            cy += sy;
            ty += dty;
        }
    }
    return best;
}

}  // namespace semdnav::vision
