#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <vector>

#include "semdnav/net/config.hpp"
#include "semdnav/net/motor.hpp"
#include "semdnav/snn/network.hpp"
#include "semdnav/vision/camera.hpp"
#include "semdnav/world/agent.hpp"
#include "semdnav/world/environment.hpp"

namespace semdnav::world {

/// Camera used in the closed loop: area-sampled with a lower threshold than
/// the characterization camera, so that the translational flow of walls a
/// few metres away crosses the event gate at cruising speed.
vision::CameraModel world_camera();

struct EpisodeConfig {
    net::NetConfig network;
    vision::CameraModel camera = world_camera();
    net::MotorConfig motor;
    double budget_s = 600.0;
    bool adaptive_velocity = true;      // intersaccade speed from the OFI rate
    double fixed_velocity_au_s = 2.5;   // used otherwise
    double ofi_min_window_ms = 20.0;    // shorter windows reuse the previous intersaccade's rate
    /// Populations to keep in the spike record; empty records nothing.
    std::vector<std::string> record_populations;

    void validate() const;
};

enum class Outcome : std::uint8_t { collided, exited, timeout };

const char* to_string(Outcome o);

struct TrajectorySample {
    double t_s;
    double x_m;
    double y_m;
    double heading_rad;
    AgentMode mode;
    friend bool operator==(const TrajectorySample&, const TrajectorySample&) = default;
};

/// Everything here is a function of the trajectory and the environment.
struct EpisodeMetrics {
    double density_pct = 0.0;
    double mean_clearance_au = 0.0;                // NaN without obstacles or walls
    double mean_intersaccade_velocity_au_s = 0.0;  // NaN without intersaccadic motion
    double max_distance_au = 0.0;
    std::vector<std::uint32_t> gap_crossings;      // per environment gap
    std::vector<double> lateral_deviation_au;      // corridors: y of each sample inside
    double lateral_mean_au = 0.0;                  // NaN outside corridors
    double lateral_std_au = 0.0;
    double penetration_au = 0.0;                   // corridors: furthest x reached
    friend bool operator==(const EpisodeMetrics&, const EpisodeMetrics&) = default;
};

struct SaccadeRecord {
    double t_s;  // decision time; the turn starts with the next cycle
    net::Decision decision;
    double turn_deg;  // signed, CCW positive
};

struct EpisodeResult {
    std::vector<TrajectorySample> trajectory;  // t = 0 and after every camera cycle
    Outcome outcome = Outcome::timeout;
    std::optional<double> collision_time_s;
    EpisodeMetrics metrics;
    std::uint64_t saccades = 0;
    std::uint64_t escape_turns = 0;
    std::vector<SaccadeRecord> saccade_log;
    std::uint64_t events = 0;
    snn::SpikeRecord spikes;  // populations from record_populations
    snn::NetworkSpec network_spec;
};

/// Recomputes the metrics bundle from a trajectory.
EpisodeMetrics compute_metrics(const std::vector<TrajectorySample>& trajectory, const Environment& env);

/// Closed loop, one iteration per camera cycle: the network advances one
/// cycle on the events queued so far, a winner or escape spike starts a turn
/// when none is active, the agent moves, collision and exit are tested and
/// the next frame's events are queued.
EpisodeResult run_episode(const Environment& env, const EpisodeConfig& cfg);

/// CSV "t_s,x_m,y_m,heading_rad,mode".
void write_trajectory_csv(std::ostream& os, const std::vector<TrajectorySample>& trajectory);
/// CSV "t_s,lateral_au" for corridor samples.
void write_lateral_csv(std::ostream& os, const std::vector<TrajectorySample>& trajectory, const Environment& env);

}  // namespace semdnav::world
