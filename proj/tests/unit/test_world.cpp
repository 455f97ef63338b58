#include <catch_amalgamated.hpp>

#include <cmath>
#include <random>
#include <sstream>

#include "semdnav/errors.hpp"
#include "semdnav/world/batch.hpp"
#include "semdnav/world/episode.hpp"

using namespace semdnav;
using namespace semdnav::world;
using Catch::Approx;

namespace {

net::MotorCommand straight(double v_au_s)
{
    return {net::MotorMode::straight, v_au_s, 0.0, 0};
}

net::MotorCommand turn(net::MotorMode m, double omega, double v_au_s = 0.0)
{
    return {m, v_au_s, omega, 0};
}

// Separating-axis test between two convex quadrilaterals; touching counts.
bool sat_overlap(const Vec2 (&a)[4], const Vec2 (&b)[4])
{
    auto separated_along = [](const Vec2 (&p)[4], const Vec2 (&q)[4]) {
        for (int i = 0; i < 4; ++i) {
            const Vec2 e = p[(i + 1) % 4] - p[i];
            const Vec2 n{-e.y, e.x};
            double pmin = 1e300, pmax = -1e300, qmin = 1e300, qmax = -1e300;
            for (int k = 0; k < 4; ++k) {
                pmin = std::min(pmin, dot(n, p[k]));
                pmax = std::max(pmax, dot(n, p[k]));
                qmin = std::min(qmin, dot(n, q[k]));
                qmax = std::max(qmax, dot(n, q[k]));
            }
            if (pmax < qmin - 1e-12 || qmax < pmin - 1e-12) return true;
        }
        return false;
    };
    return !separated_along(a, b) && !separated_along(b, a);
}

Environment single_obstacle(Vec2 c, double size = 1.0)
{
    Environment env;
    env.arena = {-10, -10, 10, 10};
    env.obstacles.push_back({c, size});
    return env;
}

EpisodeConfig short_episode(double budget_s)
{
    EpisodeConfig c;
    c.budget_s = budget_s;
    return c;
}

}  // namespace

TEST_CASE("straight motion covers speed times time", "[world][agent]")
{
    AgentState s;
    for (int i = 0; i < 100; ++i) s = step_agent(s, straight(2.5), 0.01);
    CHECK(s.x == Approx(1.0).epsilon(1e-12));
    CHECK(s.y == Approx(0.0).margin(1e-12));

    AgentState d;
    d.heading = deg_to_rad(90.0);
    d = step_agent(d, straight(1.0), 1.0);
    CHECK(d.y == Approx(0.4));
}

TEST_CASE("turns rotate at the commanded rate", "[world][agent]")
{
    AgentState s;
    for (int i = 0; i < 10; ++i) s = step_agent(s, turn(net::MotorMode::turn_left, 4.0), 0.1);
    CHECK(rad_to_deg(s.heading) == Approx(4.0));
    CHECK(s.x == 0.0);

    AgentState r;
    r = step_agent(r, turn(net::MotorMode::turn_right, 187.5), 0.46);
    CHECK(rad_to_deg(r.heading) == Approx(-86.25));
}

TEST_CASE("heading stays wrapped", "[world][agent][property]")
{
    AgentState s;
    for (int i = 0; i < 1000; ++i) {
        s = step_agent(s, turn(net::MotorMode::turn_left, 187.5, 0.38), 0.05);
        REQUIRE(s.heading > -kPi);
        REQUIRE(s.heading <= kPi);
    }
}

TEST_CASE("collision basics", "[world][collision]")
{
    AgentState s;
    CHECK_FALSE(detect_collision(s, single_obstacle({5.0, 0.0})));
    CHECK(detect_collision(s, single_obstacle({0.0, 0.0})));
    // Faces exactly touching: 0.2 + 0.5.
    CHECK(detect_collision(s, single_obstacle({0.7, 0.0})));
    CHECK_FALSE(detect_collision(s, single_obstacle({0.7 + 1e-6, 0.0})));
    // A corner of the rotated robot grazing the face.
    AgentState r;
    r.heading = deg_to_rad(45.0);
    const double reach = 0.2 * std::sqrt(2.0);
    CHECK(detect_collision(r, single_obstacle({reach + 0.5, 0.0})));
    CHECK_FALSE(detect_collision(r, single_obstacle({reach + 0.5 + 1e-6, 0.0})));
}

TEST_CASE("collision agrees with a separating-axis oracle", "[world][collision][property]")
{
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> pos(-1.2, 1.2), ang(-kPi, kPi);
    int hits = 0;
    for (int i = 0; i < 5000; ++i) {
        AgentState s;
        s.x = pos(rng);
        s.y = pos(rng);
        s.heading = ang(rng);
        const auto env = single_obstacle({0.0, 0.0});
        const Vec2 box[4] = {{-0.5, -0.5}, {0.5, -0.5}, {0.5, 0.5}, {-0.5, 0.5}};
        const auto fp = footprint(s);
        const bool expect = sat_overlap(fp.corner, box);
        hits += expect;
        INFO("pose " << s.x << "," << s.y << "," << s.heading);
        REQUIRE(detect_collision(s, env) == expect);
    }
    CHECK(hits > 500);
    CHECK(hits < 4500);
}

TEST_CASE("walls collide like obstacles", "[world][collision]")
{
    Environment env;
    env.arena = {-10, -10, 10, 10};
    env.walls.push_back({{-5.0, 0.5}, {5.0, 0.5}});
    AgentState s;
    CHECK_FALSE(detect_collision(s, env));
    s.y = 0.3;
    CHECK(detect_collision(s, env));
}

TEST_CASE("obstacle density", "[world][density]")
{
    Environment empty;
    empty.arena = {0, 0, 10, 10};
    CHECK(obstacle_density(empty) == 0.0);

    Environment one = empty;
    one.obstacles.push_back({{5.0, 5.0}, 1.0});
    CHECK(obstacle_density(one) == Approx(1.0).margin(0.1));

    EnvSpec spec;
    spec.kind = EnvKind::clutter;
    spec.density_pct = 20.0;
    const auto env = generate_environment(spec, 7);
    CHECK(obstacle_density(env) == Approx(20.0).margin(2.0));
}

TEST_CASE("clutter keeps the start clear and is seed deterministic", "[world][generator]")
{
    EnvSpec spec;
    spec.density_pct = 25.0;
    const auto a = generate_environment(spec, 3);
    const auto b = generate_environment(spec, 3);
    const auto c = generate_environment(spec, 4);
    REQUIRE(a.obstacles.size() == b.obstacles.size());
    for (std::size_t i = 0; i < a.obstacles.size(); ++i) CHECK(a.obstacles[i].centre == b.obstacles[i].centre);
    CHECK_FALSE(a.obstacles[0].centre == c.obstacles[0].centre);
    for (const auto& o : a.obstacles) CHECK(norm(o.centre - a.start.position()) >= 2.0);
    CHECK_FALSE(detect_collision(a.start, a));
}

TEST_CASE("corridor walls sit a width apart", "[world][generator]")
{
    EnvSpec spec;
    spec.kind = EnvKind::corridor;
    spec.corridor_width_au = 15.0;
    const auto env = generate_environment(spec, 1);
    REQUIRE(env.is_corridor());
    double ymin = 1e9, ymax = -1e9;
    for (const auto& w : env.walls)
        if (w.a.y == w.b.y) {
            ymin = std::min(ymin, w.a.y);
            ymax = std::max(ymax, w.a.y);
        }
    CHECK(ymax - ymin == Approx(6.0));
    CHECK(env.start.y == 0.0);
    CHECK(env.start.heading == 0.0);
}

TEST_CASE("gap arena openings", "[world][generator]")
{
    EnvSpec spec;
    spec.kind = EnvKind::gap_arena;
    spec.gap_au = 5.0;
    const auto env = generate_environment(spec, 1);
    REQUIRE(env.gaps.size() == 2);
    CHECK(env.gaps[kVariableGap].width_m() == Approx(2.0));
    CHECK(env.gaps[kFixedGap].width_m() == Approx(4.0));
    CHECK(env.gaps[kFixedGap].wall_x == env.gaps[kVariableGap].wall_x);
}

TEST_CASE("invalid specs are rejected", "[world][errors]")
{
    EnvSpec spec;
    spec.density_pct = -1.0;
    CHECK_THROWS_AS(generate_environment(spec, 1), ConfigError);
    spec = {};
    spec.kind = EnvKind::gap_arena;
    spec.gap_au = 100.0;
    CHECK_THROWS_AS(generate_environment(spec, 1), ConfigError);
    CHECK_THROWS_AS(env_kind_from_string("maze"), ConfigError);
}

TEST_CASE("metrics follow from the trajectory", "[world][episode][property]")
{
    EnvSpec spec;
    spec.kind = EnvKind::corridor;
    const auto env = generate_environment(spec, 2);
    const auto r = run_episode(env, short_episode(3.0));
    const auto m = compute_metrics(r.trajectory, env);
    CHECK(m.mean_clearance_au == r.metrics.mean_clearance_au);
    CHECK(m.max_distance_au == r.metrics.max_distance_au);
    CHECK(m.lateral_deviation_au == r.metrics.lateral_deviation_au);
    CHECK(m.lateral_std_au == r.metrics.lateral_std_au);
    CHECK(m.penetration_au == r.metrics.penetration_au);
    // Lateral deviation is the y offset in robot units.
    REQUIRE(!m.lateral_deviation_au.empty());
    CHECK(m.lateral_deviation_au.front() == Approx(m_to_au(r.trajectory.front().y_m)).margin(1e-12));
}

TEST_CASE("episodes are deterministic", "[world][episode]")
{
    EnvSpec spec;
    spec.density_pct = 10.0;
    const auto env = generate_environment(spec, 5);
    const auto a = run_episode(env, short_episode(2.0));
    const auto b = run_episode(env, short_episode(2.0));
    CHECK(a.trajectory == b.trajectory);
    CHECK(a.saccades == b.saccades);
    CHECK(a.events == b.events);
}

TEST_CASE("empty box keeps its distance to the walls", "[world][episode]")
{
    EnvSpec spec;
    spec.kind = EnvKind::empty_box;
    const auto env = generate_environment(spec, 1);
    const auto r = run_episode(env, short_episode(2.0));
    CHECK(r.outcome == Outcome::timeout);
    CHECK(r.metrics.mean_clearance_au >= 6.0);
    CHECK(r.trajectory.back().t_s == Approx(2.0).margin(0.02));
}

TEST_CASE("batch output does not depend on the thread count", "[world][batch]")
{
    std::vector<BatchCell> cells;
    for (std::uint64_t s = 1; s <= 3; ++s) {
        BatchCell c;
        c.group = "corridor";
        c.env.kind = EnvKind::corridor;
        c.env_seed = s;
        c.net_seed = s;
        c.episode = short_episode(1.0);
        cells.push_back(c);
    }
    BatchCell bad = cells[0];
    bad.env.density_pct = -5.0;
    cells.push_back(bad);
    auto csv = [&](unsigned threads) {
        std::ostringstream os;
        const auto rows = run_batch(cells, threads);
        write_batch_csv(os, rows);
        return std::make_pair(os.str(), rows);
    };
    const auto [one, rows] = csv(1);
    const auto [three, _] = csv(3);
    CHECK(one == three);
    CHECK_FALSE(rows.back().outcome.has_value());
    CHECK_FALSE(rows.back().error.empty());
    const auto sum = summarize(rows);
    REQUIRE(sum.size() == 1);
    CHECK(sum[0].runs == 4);
    CHECK(sum[0].failed == 1);
}
