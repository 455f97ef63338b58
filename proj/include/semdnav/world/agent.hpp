#pragma once

#include <cstdint>

#include "semdnav/geometry.hpp"
#include "semdnav/net/motor.hpp"
#include "semdnav/units.hpp"

namespace semdnav::world {

enum class AgentMode : std::uint8_t { intersaccade, saccade };

const char* to_string(AgentMode m);

struct AgentState {
    double x = 0.0;        // m
    double y = 0.0;        // m
    double heading = 0.0;  // rad, CCW from +x, wrapped to (-pi, pi]
    AgentMode mode = AgentMode::intersaccade;

    Vec2 position() const { return {x, y}; }
};

/// Advances the pose by dt_s. Straight commands translate along the heading
/// at command.v_forward_au_s; turns rotate at +-omega (left is CCW) while
/// moving at command.v_forward_au_s, integrated with the midpoint heading.
AgentState step_agent(const AgentState& s, const net::MotorCommand& command, double dt_s);

/// Corners of the robot square, counter-clockwise.
struct Footprint {
    Vec2 corner[4];
};

Footprint footprint(const AgentState& s, double size_m = kRobotSizeM);

}  // namespace semdnav::world
