#include "semdnav/snn/lif.hpp"

#include <cstring>
#include <string>

#include "semdnav/errors.hpp"

namespace semdnav::snn {

namespace {
// nA / pF expressed in mV / ms
constexpr double kCurrentScale = 1000.0;
}  // namespace

void LifParams::validate() const
{
    if (!(c_m_pf > 0) || !(tau_m_ms > 0) || !(tau_syn_exc_ms > 0) || !(tau_syn_inh_ms > 0) || !(t_ref_ms >= 0))
        throw ConfigError("LIF parameters: capacitance and time constants must be > 0");
    if (!(v_reset_mv < v_th_mv)) throw ConfigError("LIF parameters: V_reset must be below V_th");
}

double current_to_voltage(double tau_syn_ms, double tau_m_ms, double c_m_pf, double h_ms)
{
    // y(h) for y(0) = 0, I(0) = 1 nA:  (e^{-h/tm} - e^{-h/ts}) / (C a),  a = 1/ts - 1/tm,
    // factored so that the exponentials never overflow
    const double a = 1.0 / tau_syn_ms - 1.0 / tau_m_ms;
    const double scale = kCurrentScale / c_m_pf;
    if (std::abs(a * h_ms) < 1e-12) return scale * std::exp(-h_ms / tau_syn_ms) * h_ms;
    if (a > 0) return -scale * std::exp(-h_ms / tau_m_ms) * std::expm1(-a * h_ms) / a;
    return scale * std::exp(-h_ms / tau_syn_ms) * std::expm1(a * h_ms) / a;
}

LifPropagator LifPropagator::make(const LifParams& p, double h_ms)
{
    p.validate();
    LifPropagator prop;
    prop.decay_m = std::exp(-h_ms / p.tau_m_ms);
    prop.decay_exc = std::exp(-h_ms / p.tau_syn_exc_ms);
    prop.decay_inh = std::exp(-h_ms / p.tau_syn_inh_ms);
    prop.exc_to_v = current_to_voltage(p.tau_syn_exc_ms, p.tau_m_ms, p.c_m_pf, h_ms);
    prop.inh_to_v = current_to_voltage(p.tau_syn_inh_ms, p.tau_m_ms, p.c_m_pf, h_ms);
    prop.offset_to_v = -kCurrentScale * p.tau_m_ms / p.c_m_pf * std::expm1(-h_ms / p.tau_m_ms);
    prop.ref_ticks = ms_to_ticks(p.t_ref_ms);
    return prop;
}

const char* to_string(SynapseKind k)
{
    switch (k) {
    case SynapseKind::excitatory: return "excitatory";
    case SynapseKind::inhibitory: return "inhibitory";
    case SynapseKind::facilitatory: return "facilitatory";
    case SynapseKind::trigger: return "trigger";
    }
    return "?";
}

SynapseKind synapse_kind_from_string(const char* s)
{
    if (!std::strcmp(s, "excitatory")) return SynapseKind::excitatory;
    if (!std::strcmp(s, "inhibitory")) return SynapseKind::inhibitory;
    if (!std::strcmp(s, "facilitatory")) return SynapseKind::facilitatory;
    if (!std::strcmp(s, "trigger")) return SynapseKind::trigger;
    throw ConfigError(std::string("unknown synapse kind '") + s + "'");
}

namespace {
void check_finite(const LifState& s)
{
    if (!std::isfinite(s.v_m) || !std::isfinite(s.i_exc) || !std::isfinite(s.i_inh))
        throw SimulationError("non-finite neuron state");
}
}  // namespace

bool lif_step(LifState& state, const LifParams& params, const LifPropagator& prop,
              std::span<const Arrival> arrivals, Tick tick)
{
    for (const auto& a : arrivals) {
        if (a.kind == SynapseKind::inhibitory)
            state.i_inh += a.weight_na;
        else
            state.i_exc += a.weight_na;
    }
    const bool spiked = lif_advance(state.v_m, state.i_exc, state.i_inh, state.refractory_until, tick, params, prop);
    check_finite(state);
    return spiked;
}

bool tde_step(TdeState& state, const LifParams& params, const LifPropagator& prop, double tau_fac_ms,
              bool fac_arrival, std::span<const double> trig_weights_na, Tick tick)
{
    if (fac_arrival) {
        state.facilitated = true;
        state.last_fac_tick = tick;
    }
    const double g = state.gain(tick, tau_fac_ms);
    for (double w : trig_weights_na) state.lif.i_exc += w * g;
    const bool spiked =
        lif_advance(state.lif.v_m, state.lif.i_exc, state.lif.i_inh, state.lif.refractory_until, tick, params, prop);
    check_finite(state.lif);
    return spiked;
}

}  // namespace semdnav::snn
