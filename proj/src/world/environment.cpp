#include "semdnav/world/environment.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <random>

#include "semdnav/errors.hpp"
#include "semdnav/units.hpp"

namespace semdnav::world {

const char* to_string(EnvKind k)
{
    switch (k) {
    case EnvKind::clutter: return "clutter";
    case EnvKind::corridor: return "corridor";
    case EnvKind::gap_arena: return "gap_arena";
    case EnvKind::empty_box: return "empty_box";
    case EnvKind::narrowing_corridor: return "narrowing_corridor";
    }
    return "?";
}

EnvKind env_kind_from_string(const std::string& s)
{
    for (auto k : {EnvKind::clutter, EnvKind::corridor, EnvKind::gap_arena, EnvKind::empty_box,
                   EnvKind::narrowing_corridor})
        if (s == to_string(k)) return k;
    throw ConfigError("environment.kind: unknown kind '" + s + "'");
}

void EnvSpec::validate() const
{
    auto positive = [](double v, const char* path) {
        if (!(v > 0) || !std::isfinite(v)) throw ConfigError(std::string("environment.") + path + ": must be > 0");
    };
    if (!(density_pct >= 0 && density_pct <= 38))
        throw ConfigError("environment.density_pct: must lie in [0, 38]");
    positive(clutter_side_au, "clutter_side_au");
    positive(corridor_width_au, "corridor_width_au");
    positive(gap_au, "gap_au");
    positive(fixed_gap_au, "fixed_gap_au");
    positive(gap_room_width_au, "gap_room_width_au");
    positive(gap_room_height_au, "gap_room_height_au");
    positive(box_side_au, "box_side_au");
    positive(narrow_start_au, "narrow_start_au");
    positive(narrow_end_au, "narrow_end_au");
    positive(obstacle_m, "obstacle_m");
    positive(grating_period_m, "grating_period_m");
    if (corridor_length_au < 40) throw ConfigError("environment.corridor_length_au: must be >= 40");
    if (!(start_clear_m >= 0)) throw ConfigError("environment.start_clear_m: must be >= 0");
    if (max_attempts < 1) throw ConfigError("environment.max_attempts: must be >= 1");
    // each opening is centred in its half of the dividing wall
    if (std::max(gap_au, fixed_gap_au) >= gap_room_height_au / 2)
        throw ConfigError("environment.gap_room_height_au: too small for both openings");
    if (narrow_end_au > narrow_start_au)
        throw ConfigError("environment.narrow_end_au: must not exceed narrow_start_au");
}

namespace {

class Builder {
public:
    Builder(Environment& env, std::mt19937_64& rng) : env_(env), rng_(rng) {}

    void wall(Vec2 a, Vec2 b)
    {
        env_.walls.push_back({a, b});
        surface({a, b});
    }

    void obstacle(Vec2 c, double size)
    {
        env_.obstacles.push_back({c, size});
        const double h = size / 2;
        const Vec2 p[4] = {{c.x - h, c.y - h}, {c.x + h, c.y - h}, {c.x + h, c.y + h}, {c.x - h, c.y + h}};
        for (int i = 0; i < 4; ++i) surface({p[i], p[(i + 1) % 4]});
    }

private:
    void surface(Segment s)
    {
        std::uniform_real_distribution<double> unit(0.0, 1.0);
        vision::SceneSurface f;
        f.segment = s;
        f.period_m = env_.spec.grating_period_m;
        f.phase = unit(rng_);
        env_.surfaces.push_back(f);
    }

    Environment& env_;
    std::mt19937_64& rng_;
};

void box_walls(Builder& b, const Bounds& r)
{
    b.wall({r.x0, r.y0}, {r.x1, r.y0});
    b.wall({r.x1, r.y0}, {r.x1, r.y1});
    b.wall({r.x1, r.y1}, {r.x0, r.y1});
    b.wall({r.x0, r.y1}, {r.x0, r.y0});
}

bool squares_overlap(const Obstacle& a, const Obstacle& b)
{
    const double h = (a.size_m + b.size_m) / 2;
    return std::abs(a.centre.x - b.centre.x) < h && std::abs(a.centre.y - b.centre.y) < h;
}

void place_clutter(Environment& env, Builder& b, std::mt19937_64& rng)
{
    const auto& s = env.spec;
    const double side = au_to_m(s.clutter_side_au);
    const double area = side * side;
    const double each = s.obstacle_m * s.obstacle_m;
    const auto count = static_cast<std::size_t>(std::llround(s.density_pct / 100.0 * area / each));
    const double h = s.obstacle_m / 2;
    std::uniform_real_distribution<double> pos(env.arena.x0 + h, env.arena.x1 - h);
    std::vector<Obstacle> placed;
    for (std::size_t i = 0; i < count; ++i) {
        bool ok = false;
        for (int attempt = 0; attempt < s.max_attempts && !ok; ++attempt) {
            Obstacle o{{pos(rng), pos(rng)}, s.obstacle_m};
            if (norm(o.centre - env.start.position()) < s.start_clear_m) continue;
            if (std::any_of(placed.begin(), placed.end(), [&](const Obstacle& p) { return squares_overlap(o, p); }))
                continue;
            placed.push_back(o);
            ok = true;
        }
        if (!ok)
            throw SimulationError("environment: cannot place obstacle " + std::to_string(i + 1) + " of " +
                                  std::to_string(count) + " for density " + std::to_string(s.density_pct) +
                                  "% within " + std::to_string(s.max_attempts) + " attempts");
    }
    for (const auto& o : placed) b.obstacle(o.centre, o.size_m);
}

}  // namespace

Environment generate_environment(const EnvSpec& spec, std::uint64_t seed)
{
    spec.validate();
    Environment env;
    env.spec = spec;
    env.seed = seed;
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> angle(-kPi, kPi);
    Builder b(env, rng);

    switch (spec.kind) {
    case EnvKind::clutter: {
        const double h = au_to_m(spec.clutter_side_au) / 2;
        env.arena = {-h, -h, h, h};
        env.start.heading = angle(rng);
        place_clutter(env, b, rng);
        break;
    }
    case EnvKind::corridor: {
        const double len = au_to_m(spec.corridor_length_au);
        const double h = au_to_m(spec.corridor_width_au) / 2;
        env.arena = {0.0, -h, len, h};
        b.wall({0.0, h}, {len, h});
        b.wall({0.0, -h}, {len, -h});
        b.wall({0.0, -h}, {0.0, h});  // closed start, open far end
        env.start.x = std::min(spec.start_clear_m, len / 2);
        break;
    }
    case EnvKind::narrowing_corridor: {
        const double len = au_to_m(spec.corridor_length_au);
        const double h0 = au_to_m(spec.narrow_start_au) / 2, h1 = au_to_m(spec.narrow_end_au) / 2;
        env.arena = {0.0, -h0, len, h0};
        b.wall({0.0, h0}, {len, h1});
        b.wall({0.0, -h0}, {len, -h1});
        b.wall({0.0, -h0}, {0.0, h0});
        env.start.x = std::min(spec.start_clear_m, len / 2);
        break;
    }
    case EnvKind::gap_arena: {
        const double w = au_to_m(spec.gap_room_width_au), hh = au_to_m(spec.gap_room_height_au) / 2;
        env.arena = {-w, -hh, w, hh};
        box_walls(b, env.arena);
        // Dividing wall at x = 0; the fixed opening is centred at +hh/2, the
        // variable one at -hh/2.
        const double fixed = au_to_m(spec.fixed_gap_au) / 2, var = au_to_m(spec.gap_au) / 2;
        const Gap g_var{"variable", 0.0, -hh / 2 - var, -hh / 2 + var};
        const Gap g_fix{"fixed", 0.0, hh / 2 - fixed, hh / 2 + fixed};
        b.wall({0.0, -hh}, {0.0, g_var.y0});
        b.wall({0.0, g_var.y1}, {0.0, g_fix.y0});
        b.wall({0.0, g_fix.y1}, {0.0, hh});
        env.gaps = {g_fix, g_var};
        env.start.x = -w / 2;
        env.start.heading = angle(rng);
        break;
    }
    case EnvKind::empty_box: {
        const double h = au_to_m(spec.box_side_au) / 2;
        env.arena = {-h, -h, h, h};
        box_walls(b, env.arena);
        env.start.heading = angle(rng);
        break;
    }
    }
    return env;
}

double obstacle_density(const Environment& env, double px_per_m)
{
    const Bounds& a = env.arena;
    if (!(a.area() > 0)) throw ConfigError("obstacle_density: arena area must be > 0");
    const auto nx = static_cast<long>(std::ceil((a.x1 - a.x0) * px_per_m));
    const auto ny = static_cast<long>(std::ceil((a.y1 - a.y0) * px_per_m));
    const double dx = (a.x1 - a.x0) / static_cast<double>(nx), dy = (a.y1 - a.y0) / static_cast<double>(ny);
    std::vector<std::uint8_t> raster(static_cast<std::size_t>(nx * ny), 0);
    for (const auto& o : env.obstacles) {
        const double h = o.size_m / 2;
        // pixel i covers centre x0 + (i + 0.5) dx
        const long i0 = std::max(0L, static_cast<long>(std::ceil((o.centre.x - h - a.x0) / dx - 0.5)));
        const long i1 = std::min(nx - 1, static_cast<long>(std::floor((o.centre.x + h - a.x0) / dx - 0.5)));
        const long j0 = std::max(0L, static_cast<long>(std::ceil((o.centre.y - h - a.y0) / dy - 0.5)));
        const long j1 = std::min(ny - 1, static_cast<long>(std::floor((o.centre.y + h - a.y0) / dy - 0.5)));
        for (long j = j0; j <= j1; ++j)
            for (long i = i0; i <= i1; ++i) raster[static_cast<std::size_t>(j * nx + i)] = 1;
    }
    const auto occupied = std::count(raster.begin(), raster.end(), std::uint8_t{1});
    return 100.0 * static_cast<double>(occupied) / static_cast<double>(raster.size());
}

namespace {

constexpr double kContactTol = 1e-9;  // touching within this distance counts as contact

// Projections of a point set onto an axis.
template <std::size_t N>
std::pair<double, double> project(const Vec2 (&pts)[N], Vec2 axis)
{
    double lo = dot(pts[0], axis), hi = lo;
    for (std::size_t i = 1; i < N; ++i) {
        const double p = dot(pts[i], axis);
        lo = std::min(lo, p);
        hi = std::max(hi, p);
    }
    return {lo, hi};
}

// Closed separating-axis test between convex point sets.
template <std::size_t N, std::size_t M>
bool sat_intersect(const Vec2 (&a)[N], const Vec2 (&b)[M], std::initializer_list<Vec2> axes)
{
    for (const Vec2 axis : axes) {
        const auto [alo, ahi] = project(a, axis);
        const auto [blo, bhi] = project(b, axis);
        if (std::max(alo, blo) > std::min(ahi, bhi) + kContactTol) return false;
    }
    return true;
}

double point_segment_distance(Vec2 p, const Segment& s)
{
    const Vec2 e = s.b - s.a;
    const double l2 = dot(e, e);
    const double t = l2 > 0 ? std::clamp(dot(p - s.a, e) / l2, 0.0, 1.0) : 0.0;
    return norm(p - (s.a + e * t));
}

}  // namespace

bool detect_collision(const AgentState& s, const Environment& env)
{
    const Footprint fp = footprint(s);
    const Vec2 u = unit_vector(s.heading), v = unit_vector(s.heading + 0.5 * kPi);
    const double reach = kRobotSizeM * std::sqrt(0.5);
    for (const auto& o : env.obstacles) {
        const double h = o.size_m / 2;
        if (std::abs(o.centre.x - s.x) > h + reach + kContactTol || std::abs(o.centre.y - s.y) > h + reach + kContactTol)
            continue;
        const Vec2 sq[4] = {{o.centre.x - h, o.centre.y - h}, {o.centre.x + h, o.centre.y - h},
                            {o.centre.x + h, o.centre.y + h}, {o.centre.x - h, o.centre.y + h}};
        if (sat_intersect(fp.corner, sq, {u, v, Vec2{1, 0}, Vec2{0, 1}})) return true;
    }
    for (const auto& w : env.walls) {
        if (point_segment_distance(s.position(), w) > reach + kContactTol) continue;
        const Vec2 seg[2] = {w.a, w.b};
        const Vec2 d = w.b - w.a;
        const double len = norm(d);
        const Vec2 n = len > 0 ? Vec2{-d.y / len, d.x / len} : u;
        if (sat_intersect(fp.corner, seg, {u, v, n})) return true;
    }
    return false;
}

double clearance_m(Vec2 p, const Environment& env)
{
    double best = std::numeric_limits<double>::infinity();
    for (const auto& o : env.obstacles) best = std::min(best, norm(o.centre - p));
    for (const auto& w : env.walls) best = std::min(best, point_segment_distance(p, w));
    return best;
}

void write_environment_csv(std::ostream& os, const Environment& env)
{
    os << "kind,x0_m,y0_m,x1_m,y1_m,size_m\n";
    const auto& a = env.arena;
    os << "arena," << a.x0 << ',' << a.y0 << ',' << a.x1 << ',' << a.y1 << ",0\n";
    for (const auto& w : env.walls) os << "wall," << w.a.x << ',' << w.a.y << ',' << w.b.x << ',' << w.b.y << ",0\n";
    for (const auto& o : env.obstacles)
        os << "obstacle," << o.centre.x << ',' << o.centre.y << ',' << o.centre.x << ',' << o.centre.y << ','
           << o.size_m << '\n';
    for (const auto& g : env.gaps)
        os << "gap," << g.wall_x << ',' << g.y0 << ',' << g.wall_x << ',' << g.y1 << ',' << g.width_m() << '\n';
}

}  // namespace semdnav::world
