#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "semdnav/geometry.hpp"
#include "semdnav/vision/scene.hpp"
#include "semdnav/world/agent.hpp"

namespace semdnav::world {

enum class EnvKind : std::uint8_t { clutter, corridor, gap_arena, empty_box, narrowing_corridor };

const char* to_string(EnvKind k);
EnvKind env_kind_from_string(const std::string& s);  // throws ConfigError

/// Environment parameters; lengths in a.u. unless suffixed _m.
struct EnvSpec {
    EnvKind kind = EnvKind::clutter;
    double density_pct = 0.0;           // clutter
    double clutter_side_au = 40.0;      // clutter arena, square
    double corridor_width_au = 15.0;    // corridor
    double corridor_length_au = 40.0;   // corridor, narrowing corridor
    double gap_au = 10.0;               // gap arena, variable opening
    double fixed_gap_au = 10.0;         // gap arena, reference opening
    double gap_room_width_au = 15.0;    // gap arena, each room along x
    double gap_room_height_au = 40.0;   // gap arena, along the dividing wall
    double box_side_au = 30.0;          // empty box
    double narrow_start_au = 20.0;      // narrowing corridor entrance width
    double narrow_end_au = 2.0;         // narrowing corridor far-end width
    double obstacle_m = 1.0;
    double start_clear_m = 2.0;         // no obstacle centre closer to the start
    double grating_period_m = 0.2;
    int max_attempts = 1000;            // per obstacle

    void validate() const;
};

/// Axis-aligned square obstacle.
struct Obstacle {
    Vec2 centre;
    double size_m = 1.0;
};

struct Bounds {
    double x0 = 0, y0 = 0, x1 = 0, y1 = 0;
    bool contains(Vec2 p) const { return p.x >= x0 && p.x <= x1 && p.y >= y0 && p.y <= y1; }
    double area() const { return (x1 - x0) * (y1 - y0); }
};

/// Opening in a dividing wall at x = wall_x, spanning [y0, y1].
struct Gap {
    std::string name;
    double wall_x = 0.0;
    double y0 = 0.0;
    double y1 = 0.0;
    double width_m() const { return y1 - y0; }
};

/// Gap arena openings, in Environment::gaps order.
inline constexpr std::size_t kFixedGap = 0;
inline constexpr std::size_t kVariableGap = 1;

struct Environment {
    EnvSpec spec;
    std::uint64_t seed = 0;
    Bounds arena;  // leaving it ends the episode as exited
    std::vector<Obstacle> obstacles;
    std::vector<Segment> walls;
    std::vector<Gap> gaps;
    std::vector<vision::SceneSurface> surfaces;  // obstacle faces and walls
    AgentState start;

    /// Corridors run along +x from x = 0 with the centreline at y = 0.
    bool is_corridor() const
    {
        return spec.kind == EnvKind::corridor || spec.kind == EnvKind::narrowing_corridor;
    }
};

/// Deterministic in (spec, seed). Throws ConfigError for invalid specs and
/// SimulationError when obstacles cannot be placed within the attempt limit.
Environment generate_environment(const EnvSpec& spec, std::uint64_t seed);

/// Percentage of the arena covered by obstacles, counted on a raster of
/// px_per_m pixels per metre (pixel centres inside any obstacle).
double obstacle_density(const Environment& env, double px_per_m = 100.0);

/// True iff the robot square touches or overlaps any obstacle or wall.
bool detect_collision(const AgentState& s, const Environment& env);

/// Distance from p to the nearest obstacle centre or wall, in metres;
/// infinity when the environment is empty.
double clearance_m(Vec2 p, const Environment& env);

/// CSV "kind,x0_m,y0_m,x1_m,y1_m,size_m": one "arena" row, one "wall" row
/// per wall segment (endpoints), one "obstacle" row per obstacle (centre in
/// x0/y0) and one "gap" row per opening.
void write_environment_csv(std::ostream& os, const Environment& env);

}  // namespace semdnav::world
