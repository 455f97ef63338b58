#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "semdnav/net/config.hpp"
#include "semdnav/snn/network.hpp"
#include "semdnav/vision/camera.hpp"

namespace semdnav::net {

struct PopIds {
    std::uint32_t sptc, tde_lr, tde_rl, int_lr, int_rl, wta, gi, et, ofi, mot1, mot2, pois1, pois2;
};

/// Number of connections each wiring row realised.
struct RowCount {
    std::string row;
    std::size_t connections;
};

struct Assembly {
    snn::NetworkSpec spec;
    PopIds ids{};
    std::vector<RowCount> rows;
};

/// Builds the collision-avoidance network. The SPTC and TDE grids are
/// indexed row * columns + column with column 0 leftmost in the image.
/// Throws ConfigError when a wiring row with non-empty endpoints realises
/// no connection.
Assembly assemble(const NetConfig& config);

/// Connection delay of the motor wave: the configured hop period less the
/// time a resting MOT neuron needs to reach threshold after one wave
/// arrival, so consecutive neurons fire delays.mot_wave_ms apart.
snn::Tick mot_wave_delay_ticks(const NetConfig& config);

struct SptcInput {
    std::vector<std::uint32_t> targets;  // one SPTC index per accepted event
    std::size_t rejected = 0;            // events outside the sensor grid
};

/// Each event at (x, y) feeds SPTC (x / 2, y / 2); polarity is ignored.
SptcInput map_events_to_sptc(const std::vector<vision::CameraEvent>& events, const NetSizes& sizes);

/// CSV "src_pop,src_idx,dst_pop,dst_idx,weight_nA,delay_ms,kind".
void write_wiring_csv(std::ostream& os, const snn::NetworkSpec& spec);

}  // namespace semdnav::net
