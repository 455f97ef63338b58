#include "semdnav/net/motor.hpp"

#include <algorithm>
#include <cmath>

#include "semdnav/errors.hpp"
#include "semdnav/units.hpp"

namespace semdnav::net {

const char* to_string(MotorMode m)
{
    switch (m) {
    case MotorMode::straight: return "straight";
    case MotorMode::turn_left: return "turn_left";
    case MotorMode::turn_right: return "turn_right";
    }
    return "?";
}

std::uint32_t injection_index(const Decision& d, const MotorConfig& cfg)
{
    if (d.escape) return 0;
    const std::uint32_t i = d.wta_index;
    if (i >= 64) throw ConfigError("decode_motor: WTA index out of range");
    if (i <= 8 || i >= 54) return 50;
    if (i <= 31) return 2 * i + 32;
    if (cfg.mot2_literal_mapping) return std::min(2 * i + 32, cfg.mot_size - 1);
    return 2 * (63 - i) + 32;
}

MotorCommand decode_motor(const Decision& d, const MotorConfig& cfg)
{
    const std::uint32_t k = injection_index(d, cfg);
    MotorCommand c;
    c.mode = (d.escape || d.wta_index < 32) ? MotorMode::turn_left : MotorMode::turn_right;
    c.v_forward_au_s = cfg.saccade_speed_au_s;
    c.omega_deg_s = cfg.omega_deg_s;
    c.remaining = static_cast<snn::Tick>(cfg.mot_size - k) * snn::ms_to_ticks(cfg.hop_ms);
    return c;
}

double intersaccade_velocity_mps(double f_ofi_hz) { return std::max(0.0, 1.0 - f_ofi_hz * 0.001); }

double intersaccade_velocity_au_s(double f_ofi_hz) { return m_to_au(intersaccade_velocity_mps(f_ofi_hz)); }

double gap_min_deg(std::uint32_t n_connect, double columns, double fov_deg)
{
    return (2.0 * n_connect + 1.0) * fov_deg / columns;
}

}  // namespace semdnav::net
