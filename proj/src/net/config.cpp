#include "semdnav/net/config.hpp"

#include <cmath>
#include <string>

#include "semdnav/errors.hpp"

namespace semdnav::net {

double NetConfig::flank_weight(std::uint32_t d) const
{
    if (d == 0) return weights.int_wta_center;
    if (!weights.int_wta_flank.empty()) return weights.int_wta_flank.at(d - 1);
    return -6.0 / (d + 1.0);
}

namespace {

void check_params(const snn::LifParams& p, const char* path)
{
    try {
        p.validate();
    } catch (const ConfigError& e) {
        throw ConfigError(std::string("network.neurons.") + path + ": " + e.what());
    }
}

void check_sign(double w, bool inhibitory, const char* path)
{
    if (!std::isfinite(w) || (inhibitory ? w > 0 : w < 0))
        throw ConfigError(std::string("network.weights.") + path + (inhibitory ? ": must be <= 0" : ": must be >= 0"));
}

}  // namespace

void NetConfig::validate() const
{
    check_params(neurons.sptc, "sptc");
    check_params(neurons.tde, "tde");
    check_params(neurons.integ, "int");
    check_params(neurons.wta, "wta");
    check_params(neurons.mot, "mot");
    check_params(neurons.gi, "gi");
    check_params(neurons.ofi, "ofi");
    check_params(neurons.et, "et");

    const auto& w = weights;
    check_sign(w.dvs_sptc, false, "dvs_sptc_nA");
    check_sign(w.sptc_tde, false, "sptc_tde_nA");
    check_sign(w.tde_int, false, "tde_int_nA");
    check_sign(w.int_wta_center, true, "int_wta_center_nA");
    for (double f : w.int_wta_flank) check_sign(f, true, "int_wta_flank_nA");
    check_sign(w.int_ofi, false, "int_ofi_nA");
    check_sign(w.wta_mot, false, "wta_mot_nA");
    check_sign(w.wta_gi, false, "wta_gi_nA");
    check_sign(w.wta_recurrent, false, "wta_recurrent_nA");
    check_sign(w.et_mot, false, "et_mot_nA");
    check_sign(w.et_gi, false, "et_gi_nA");
    check_sign(w.gi_et, true, "gi_et_nA");
    check_sign(w.gi_wta, true, "gi_wta_nA");
    check_sign(w.mot_wta, true, "mot_wta_nA");
    check_sign(w.mot_et, true, "mot_et_nA");
    check_sign(w.mot_sptc, true, "mot_sptc_nA");
    check_sign(w.mot_cross, true, "mot_cross_nA");
    check_sign(w.mot_wave, false, "mot_wave_nA");
    check_sign(w.mot_self, true, "mot_self_nA");
    check_sign(w.pois1_wta, false, "pois1_wta_nA");
    check_sign(w.pois2_et, false, "pois2_et_nA");
    check_sign(w.pois2_et_scale, false, "pois2_et_scale");
    if (!w.int_wta_flank.empty() && w.int_wta_flank.size() < n_connect)
        throw ConfigError("network.weights.int_wta_flank_nA: needs at least n_connect entries");

    auto tick_delay = [](double ms, const char* path) {
        if (!(ms > 0) || snn::ms_to_ticks(ms) < 1 ||
            std::abs(snn::ms_to_ticks(ms) * snn::kDtMs - ms) > 1e-9)
            throw ConfigError(std::string("network.delays.") + path + ": must be a positive multiple of 0.1 ms");
    };
    tick_delay(delays.synapse_ms, "synapse_ms");
    tick_delay(delays.mot_wave_ms, "mot_wave_ms");
    tick_delay(delays.wta_recurrent_ms, "wta_recurrent_ms");
    tick_delay(delays.camera_ms, "camera_ms");

    if (!(tau_fac_ms > 0)) throw ConfigError("network.tau_fac_ms: must be > 0");
    if (!(pois1_rate_hz >= 0 && pois1_rate_hz <= 10000)) throw ConfigError("network.pois1_rate_hz: out of range");
    if (!(pois2_rate_hz >= 0 && pois2_rate_hz <= 10000)) throw ConfigError("network.pois2_rate_hz: out of range");

    const auto& s = sizes;
    if (s.gi > 1 || s.et > 1 || s.ofi > 1 || s.pois2 > 1)
        throw ConfigError("network.sizes: gi, et, ofi and pois2 hold at most one neuron");
    if (s.pois1 != 0 && s.pois1 != s.wta) throw ConfigError("network.sizes.pois1: must equal wta or be 0");
    if (s.columns != 0 && s.wta != 0 && s.columns != s.wta)
        throw ConfigError("network.sizes.wta: must equal columns when both populations exist");
    if ((s.columns == 0) != (s.rows == 0)) throw ConfigError("network.sizes: columns and rows must be both zero or both positive");
    if (s.mot != 0 && s.mot != 96) throw ConfigError("network.sizes.mot: the motor map needs 96 neurons");
    if (s.mot != 0 && s.wta != 0 && s.wta != 64) throw ConfigError("network.sizes.wta: the motor map needs 64 neurons");
}

}  // namespace semdnav::net
