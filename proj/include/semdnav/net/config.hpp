#pragma once

#include <cstdint>
#include <vector>

#include "semdnav/net/params.hpp"
#include "semdnav/snn/lif.hpp"

namespace semdnav::net {

struct NetSizes {
    std::uint32_t columns = 64;  // SPTC / TDE columns, INT and WTA-aligned
    std::uint32_t rows = 20;     // SPTC / TDE rows
    std::uint32_t wta = 64;
    std::uint32_t gi = 1;
    std::uint32_t et = 1;
    std::uint32_t ofi = 1;
    std::uint32_t mot = 96;  // each of MOT1, MOT2
    std::uint32_t pois1 = 64;
    std::uint32_t pois2 = 1;
};

struct NetNeurons {
    snn::LifParams sptc = sptc_params();
    snn::LifParams tde = tde_params();
    snn::LifParams integ = int_params();
    snn::LifParams wta = wta_params();
    snn::LifParams mot = mot_params();
    snn::LifParams gi = gi_params();
    snn::LifParams ofi = ofi_params();
    snn::LifParams et = et_params();
};

/// Synaptic weights in nA (negative = inhibitory).
struct NetWeights {
    double dvs_sptc = 0.001;
    double sptc_tde = 4.0;  // trigger and facilitator
    double tde_int = 1.0;
    double int_wta_center = -5.0;
    /// Weight at neighbour distance d = 1..n_connect; empty derives
    /// -6 / (d + 1), i.e. -3, -2, -1.5, -1.2, ...
    std::vector<double> int_wta_flank;
    double int_ofi = 0.01;  // calibrated; see README
    double wta_mot = 10.0;
    double wta_gi = 10.0;
    double wta_recurrent = 0.5;
    double et_mot = 10.0;
    double et_gi = 10.0;
    double gi_et = -10.0;
    double gi_wta = -10.0;
    double mot_wta = -30.0;
    double mot_et = -30.0;
    double mot_sptc = -30.0;
    double mot_cross = -10.0;
    double mot_wave = 10.0;
    double mot_self = -10.0;
    double pois1_wta = 1.0;
    double pois2_et = 0.3;
    double pois2_et_scale = 1.0;
};

struct NetDelays {
    double synapse_ms = 0.1;
    double mot_wave_ms = 10.0;  // spike-to-spike hop period of the motor wave
    double wta_recurrent_ms = 1.0;
    double camera_ms = 0.1;  // camera event to SPTC arrival
};

struct NetConfig {
    NetSizes sizes;
    NetNeurons neurons;
    NetWeights weights;
    NetDelays delays;
    std::uint32_t n_connect = 4;
    double tau_fac_ms = 10.0;
    double pois1_rate_hz = kPoissonRateHz;
    double pois2_rate_hz = kPoissonRateHz;
    /// WTA(32-53) -> MOT2 index: false uses 2(63 - i) + 32, true the literal
    /// 2i + 32 (which exceeds the MOT range and is clipped to the last neuron).
    bool mot2_literal_mapping = false;
    std::uint64_t seed = 1;
    std::size_t max_pending = std::size_t{1} << 24;

    /// Flank weight for neighbour distance d >= 1.
    double flank_weight(std::uint32_t d) const;
    /// Throws ConfigError with the offending field path.
    void validate() const;
};

}  // namespace semdnav::net
