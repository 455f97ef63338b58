#pragma once

#include <cstdint>

#include "semdnav/snn/lif.hpp"

namespace semdnav::net {

enum class MotorMode : std::uint8_t { straight, turn_left, turn_right };

const char* to_string(MotorMode m);

struct MotorCommand {
    MotorMode mode = MotorMode::straight;
    double v_forward_au_s = 0.0;
    double omega_deg_s = 0.0;  // 0 when straight; sign carried by mode
    snn::Tick remaining = 0;   // ticks left in a turn
};

struct MotorConfig {
    double omega_deg_s = 187.5;
    double saccade_speed_au_s = 0.38;
    double hop_ms = 10.0;      // motor wave delay per neuron
    std::uint32_t mot_size = 96;
    bool mot2_literal_mapping = false;
};

/// A decision: an inverse-WTA winner index or the escape-turn neuron.
struct Decision {
    bool escape = false;
    std::uint32_t wta_index = 0;
};

/// Motor neuron at which the wave starts for a decision.
std::uint32_t injection_index(const Decision& d, const MotorConfig& cfg = {});

/// Winners 0-31 turn left, 32-63 right, escape turns left; the turn lasts
/// until the wave reaches the last motor neuron.
MotorCommand decode_motor(const Decision& d, const MotorConfig& cfg = {});

/// Intersaccadic speed from the mean OFI rate, in m/s, clamped at 0.
double intersaccade_velocity_mps(double f_ofi_hz);
double intersaccade_velocity_au_s(double f_ofi_hz);

/// Smallest gap the inverse WTA can resolve, in degrees.
double gap_min_deg(std::uint32_t n_connect, double columns = 64.0, double fov_deg = 140.0);

/// Mean OFI rate over the current intersaccade.
class OfiReadout {
public:
    void add(std::uint64_t spikes, double elapsed_ms)
    {
        spikes_ += spikes;
        window_ms_ += elapsed_ms;
    }
    void reset()
    {
        spikes_ = 0;
        window_ms_ = 0.0;
    }
    double window_ms() const { return window_ms_; }
    double mean_rate_hz() const { return window_ms_ > 0 ? 1000.0 * static_cast<double>(spikes_) / window_ms_ : 0.0; }

private:
    std::uint64_t spikes_ = 0;
    double window_ms_ = 0.0;
};

}  // namespace semdnav::net
