#include "semdnav/world/agent.hpp"

#include <cmath>

namespace semdnav::world {

const char* to_string(AgentMode m) { return m == AgentMode::intersaccade ? "intersaccade" : "saccade"; }

AgentState step_agent(const AgentState& s, const net::MotorCommand& command, double dt_s)
{
    AgentState n = s;
    const double v = au_to_m(command.v_forward_au_s);
    double omega = 0.0;
    if (command.mode == net::MotorMode::turn_left) omega = deg_to_rad(command.omega_deg_s);
    if (command.mode == net::MotorMode::turn_right) omega = -deg_to_rad(command.omega_deg_s);
    const double mid = s.heading + 0.5 * omega * dt_s;
    n.x = s.x + v * dt_s * std::cos(mid);
    n.y = s.y + v * dt_s * std::sin(mid);
    n.heading = wrap_angle(s.heading + omega * dt_s);
    n.mode = command.mode == net::MotorMode::straight ? AgentMode::intersaccade : AgentMode::saccade;
    return n;
}

Footprint footprint(const AgentState& s, double size_m)
{
    const Vec2 f = unit_vector(s.heading) * (0.5 * size_m);
    const Vec2 l = unit_vector(s.heading + 0.5 * kPi) * (0.5 * size_m);
    const Vec2 c = s.position();
    return {{c + f + l, c - f + l, c - f - l, c + f - l}};
}

}  // namespace semdnav::world
