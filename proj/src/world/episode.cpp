#include "semdnav/world/episode.hpp"

#include <cmath>
#include <limits>
#include <ostream>

#include "semdnav/errors.hpp"
#include "semdnav/net/assemble.hpp"
#include "semdnav/units.hpp"

namespace semdnav::world {

vision::CameraModel world_camera()
{
    vision::CameraModel cam;
    cam.threshold = 0.02;
    return cam;
}

void EpisodeConfig::validate() const
{
    network.validate();
    camera.validate();
    if (!(budget_s > 0)) throw ConfigError("episode.budget_s: must be > 0");
    if (!(fixed_velocity_au_s >= 0)) throw ConfigError("episode.fixed_velocity_au_s: must be >= 0");
    if (!(motor.omega_deg_s > 0)) throw ConfigError("motor.omega_deg_s: must be > 0");
    if (!(motor.saccade_speed_au_s >= 0)) throw ConfigError("motor.saccade_speed_au_s: must be >= 0");
    if (!(ofi_min_window_ms >= 0)) throw ConfigError("episode.ofi_min_window_ms: must be >= 0");
    const double ticks = 1e6 / camera.rate_hz / 100.0;
    if (std::abs(ticks - std::round(ticks)) > 1e-9)
        throw ConfigError("camera.rate_hz: the cycle must be a whole number of 0.1 ms ticks");
}

const char* to_string(Outcome o)
{
    switch (o) {
    case Outcome::collided: return "collided";
    case Outcome::exited: return "exited";
    case Outcome::timeout: return "timeout";
    }
    return "?";
}

EpisodeMetrics compute_metrics(const std::vector<TrajectorySample>& tr, const Environment& env)
{
    EpisodeMetrics m;
    m.density_pct = obstacle_density(env);
    m.gap_crossings.assign(env.gaps.size(), 0);
    const double nan = std::numeric_limits<double>::quiet_NaN();
    if (tr.empty()) {
        m.mean_clearance_au = m.mean_intersaccade_velocity_au_s = nan;
        m.lateral_mean_au = m.lateral_std_au = nan;
        return m;
    }

    double clear_sum = 0.0;
    std::size_t clear_n = 0;
    double dist = 0.0, time = 0.0;
    const Vec2 p0{tr.front().x_m, tr.front().y_m};
    for (std::size_t k = 0; k < tr.size(); ++k) {
        const Vec2 p{tr[k].x_m, tr[k].y_m};
        const double c = clearance_m(p, env);
        if (std::isfinite(c)) {
            clear_sum += c;
            ++clear_n;
        }
        m.max_distance_au = std::max(m.max_distance_au, m_to_au(norm(p - p0)));
        if (env.is_corridor()) {
            m.penetration_au = std::max(m.penetration_au, m_to_au(p.x));
            if (p.x >= env.arena.x0 && p.x <= env.arena.x1) m.lateral_deviation_au.push_back(m_to_au(p.y));
        }
        if (k == 0) continue;
        const Vec2 q{tr[k - 1].x_m, tr[k - 1].y_m};
        if (tr[k].mode == AgentMode::intersaccade) {
            dist += norm(p - q);
            time += tr[k].t_s - tr[k - 1].t_s;
        }
        for (std::size_t g = 0; g < env.gaps.size(); ++g) {
            const Gap& gap = env.gaps[g];
            if ((q.x < gap.wall_x) == (p.x < gap.wall_x)) continue;
            const double u = (gap.wall_x - q.x) / (p.x - q.x);
            const double y = q.y + u * (p.y - q.y);
            if (y >= gap.y0 && y <= gap.y1) ++m.gap_crossings[g];
        }
    }
    m.mean_clearance_au = clear_n ? m_to_au(clear_sum / static_cast<double>(clear_n)) : nan;
    m.mean_intersaccade_velocity_au_s = time > 0 ? m_to_au(dist / time) : nan;
    if (m.lateral_deviation_au.empty()) {
        m.lateral_mean_au = m.lateral_std_au = nan;
    } else {
        double s = 0.0, s2 = 0.0;
        for (double y : m.lateral_deviation_au) s += y;
        const double n = static_cast<double>(m.lateral_deviation_au.size());
        m.lateral_mean_au = s / n;
        for (double y : m.lateral_deviation_au) s2 += (y - m.lateral_mean_au) * (y - m.lateral_mean_au);
        m.lateral_std_au = std::sqrt(s2 / n);
    }
    return m;
}

EpisodeResult run_episode(const Environment& env, const EpisodeConfig& cfg)
{
    cfg.validate();
    EpisodeResult res;
    auto assembly = net::assemble(cfg.network);
    snn::Network net(assembly.spec);
    const auto& id = assembly.ids;
    res.network_spec = assembly.spec;

    std::vector<std::uint8_t> record(assembly.spec.populations.size(), 0);
    for (const auto& name : cfg.record_populations) {
        const auto p = assembly.spec.find(name);
        if (!p) throw ConfigError("episode.record_populations: unknown population '" + name + "'");
        record[*p] = 1;
    }

    const vision::Scene scene(env.surfaces);
    const auto& cam = cfg.camera;
    const snn::Tick cycle = snn::ms_to_ticks(1000.0 / cam.rate_hz);
    const double dt_s = snn::ticks_to_ms(cycle) / 1000.0;
    const snn::Tick lag = std::max<snn::Tick>(1, snn::ms_to_ticks(cfg.network.delays.camera_ms));
    const auto n_cycles = static_cast<std::int64_t>(std::ceil(cfg.budget_s / dt_s - 1e-9));
    net::MotorConfig motor = cfg.motor;
    motor.mot2_literal_mapping = cfg.network.mot2_literal_mapping;
    motor.mot_size = cfg.network.sizes.mot ? cfg.network.sizes.mot : motor.mot_size;

    AgentState agent = env.start;
    res.trajectory.push_back({0.0, agent.x, agent.y, agent.heading, agent.mode});
    vision::Frame prev = vision::render_frame(scene, {agent.x, agent.y, agent.heading}, cam);

    net::MotorCommand turn;  // active while turn.remaining > 0
    net::OfiReadout ofi;
    double last_ofi_hz = 0.0;

    for (std::int64_t k = 1; k <= n_cycles; ++k) {
        std::optional<net::Decision> decision;
        for (snn::Tick t = 0; t < cycle; ++t) {
            net.step();
            for (const auto& sp : net.last_spikes()) {
                if (record[sp.pop]) res.spikes.events.push_back(sp);
                if (sp.pop == id.ofi && agent.mode == AgentMode::intersaccade && turn.remaining == 0) ofi.add(1, 0.0);
                if (decision || turn.remaining > 0) continue;
                if (sp.pop == id.et) decision = net::Decision{true, 0};
                else if (sp.pop == id.wta) decision = net::Decision{false, sp.index};
            }
        }

        net::MotorCommand cmd;
        if (turn.remaining > 0) {
            cmd = turn;
            turn.remaining = std::max<snn::Tick>(0, turn.remaining - cycle);
        } else {
            cmd.mode = net::MotorMode::straight;
            if (cfg.adaptive_velocity) {
                const double rate = ofi.window_ms() >= cfg.ofi_min_window_ms ? ofi.mean_rate_hz() : last_ofi_hz;
                cmd.v_forward_au_s = net::intersaccade_velocity_au_s(rate);
            } else {
                cmd.v_forward_au_s = cfg.fixed_velocity_au_s;
            }
            ofi.add(0, snn::ticks_to_ms(cycle));
        }

        agent = step_agent(agent, cmd, dt_s);
        const double t_s = static_cast<double>(k) * dt_s;
        res.trajectory.push_back({t_s, agent.x, agent.y, agent.heading, agent.mode});

        if (detect_collision(agent, env)) {
            res.outcome = Outcome::collided;
            res.collision_time_s = t_s;
            break;
        }
        if (!env.arena.contains(agent.position())) {
            res.outcome = Outcome::exited;
            break;
        }

        // A decision in this cycle starts a turn from the next one.
        if (decision && turn.remaining == 0) {
            turn = net::decode_motor(*decision, motor);
            ++res.saccades;
            if (decision->escape) ++res.escape_turns;
            const double sign = turn.mode == net::MotorMode::turn_left ? 1.0 : -1.0;
            res.saccade_log.push_back(
                {t_s, *decision, sign * turn.omega_deg_s * snn::ticks_to_ms(turn.remaining) / 1000.0});
            if (ofi.window_ms() > 0) last_ofi_hz = ofi.mean_rate_hz();
            ofi.reset();
        }

        const vision::Frame cur = vision::render_frame(scene, {agent.x, agent.y, agent.heading}, cam);
        const auto events = vision::generate_events(prev, cur, static_cast<std::int64_t>(net.now()) * 100, cam);
        res.events += events.size();
        const auto input = net::map_events_to_sptc(events, cfg.network.sizes);
        for (const auto target : input.targets)
            net.inject({id.sptc, target}, cfg.network.weights.dvs_sptc, snn::SynapseKind::excitatory, lag);
        prev = cur;
    }
    res.metrics = compute_metrics(res.trajectory, env);
    return res;
}

void write_trajectory_csv(std::ostream& os, const std::vector<TrajectorySample>& tr)
{
    os << "t_s,x_m,y_m,heading_rad,mode\n";
    const auto old = os.precision(10);
    for (const auto& s : tr)
        os << s.t_s << ',' << s.x_m << ',' << s.y_m << ',' << s.heading_rad << ',' << to_string(s.mode) << '\n';
    os.precision(old);
}

void write_lateral_csv(std::ostream& os, const std::vector<TrajectorySample>& tr, const Environment& env)
{
    os << "t_s,lateral_au\n";
    if (!env.is_corridor()) return;
    for (const auto& s : tr)
        if (s.x_m >= env.arena.x0 && s.x_m <= env.arena.x1) os << s.t_s << ',' << m_to_au(s.y_m) << '\n';
}

}  // namespace semdnav::world
