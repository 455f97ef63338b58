#pragma once

#include <cstdint>
#include <string>

#include <json.hpp>

#include "semdnav/charz/tuning.hpp"
#include "semdnav/world/environment.hpp"
#include "semdnav/world/episode.hpp"

namespace semdnav {

/// Everything a run depends on. Omitted keys keep their defaults; key names
/// carry their units (tau_m_ms, dvs_sptc_nA, rate_Hz).
struct RunConfig {
    world::EpisodeConfig episode;        // network, world camera, motor, budget
    world::EnvSpec environment;
    charz::TuningOptions characterize;   // grid, optics, its own camera
    std::uint64_t env_seed = 1;
    std::uint64_t net_seed = 1;
    std::string output_dir = "out";
    unsigned parallelism = 1;

    /// Propagates the network section into the characterization run, then
    /// validates every part; errors carry the field path.
    void finalize();
};

/// Overlays `j` on the defaults. Unknown keys and type mismatches throw
/// ConfigError naming the field path.
RunConfig run_config_from_json(const nlohmann::json& j);
RunConfig load_run_config(const std::string& path);

/// The fully resolved config; reading it back gives the same config.
nlohmann::json to_json(const RunConfig& c);

/// FNV-1a over the compact dump of to_json(c) without the output directory
/// and thread count, as 16 hex digits.
std::string config_hash(const RunConfig& c);

}  // namespace semdnav
