#pragma once

#include <cmath>
#include <cstdint>
#include <span>

namespace semdnav::snn {

using Tick = std::int64_t;

/// Simulation step. Every synaptic delay is an integer number of these.
inline constexpr double kDtMs = 0.1;

inline Tick ms_to_ticks(double ms) { return static_cast<Tick>(std::llround(ms / kDtMs)); }
inline double ticks_to_ms(Tick t) { return static_cast<double>(t) * kDtMs; }

/// Current-based LIF with exponentially decaying synaptic currents.
/// Units: mV, pF, ms, nA.
struct LifParams {
    double e_l_mv = -65.0;
    double c_m_pf = 250.0;
    double tau_m_ms = 20.0;
    double t_ref_ms = 1.0;
    double tau_syn_exc_ms = 5.0;
    double tau_syn_inh_ms = 5.0;
    double v_th_mv = -50.0;
    double v_reset_mv = -65.0;
    double v_init_mv = -65.0;
    double i_offset_na = 0.0;

    /// Throws ConfigError when time constants or capacitance are not
    /// strictly positive, or V_reset >= V_th.
    void validate() const;
};

struct LifState {
    double v_m = 0.0;
    double i_exc = 0.0;  // >= 0
    double i_inh = 0.0;  // <= 0
    Tick refractory_until = 0;

    static LifState initial(const LifParams& p) { return {p.v_init_mv, 0.0, 0.0, 0}; }
};

/// One-step exact propagator of the linear subsystem for a fixed step.
struct LifPropagator {
    double decay_m = 0;      // exp(-h/tau_m)
    double decay_exc = 0;    // exp(-h/tau_exc)
    double decay_inh = 0;    // exp(-h/tau_inh)
    double exc_to_v = 0;     // mV per nA of excitatory current at step start
    double inh_to_v = 0;
    double offset_to_v = 0;  // mV per nA of constant bias current
    Tick ref_ticks = 0;

    static LifPropagator make(const LifParams& p, double h_ms = kDtMs);
};

/// Contribution of a current with decay constant `tau_syn_ms`, present at
/// the start of a step of length `h_ms`, to the membrane at the end of the
/// step. Handles tau_syn == tau_m.
double current_to_voltage(double tau_syn_ms, double tau_m_ms, double c_m_pf, double h_ms);

/// Advances one neuron by one step. Arrivals must already be added to the
/// currents. Returns true when the neuron crosses threshold in this step.
inline bool lif_advance(double& v, double& i_exc, double& i_inh, Tick& refractory_until, Tick tick,
                        const LifParams& p, const LifPropagator& prop)
{
    const double y = v - p.e_l_mv;
    const double y_next = y * prop.decay_m + i_exc * prop.exc_to_v + i_inh * prop.inh_to_v +
                          p.i_offset_na * prop.offset_to_v;
    i_exc *= prop.decay_exc;
    i_inh *= prop.decay_inh;
    if (tick < refractory_until) {
        v = p.v_reset_mv;
        return false;
    }
    v = p.e_l_mv + y_next;
    if (v >= p.v_th_mv) {
        v = p.v_reset_mv;
        refractory_until = tick + prop.ref_ticks;
        return true;
    }
    return false;
}

enum class SynapseKind : std::uint8_t { excitatory, inhibitory, facilitatory, trigger };

const char* to_string(SynapseKind k);
SynapseKind synapse_kind_from_string(const char* s);

struct Arrival {
    double weight_na;
    SynapseKind kind;
};

/// Advances `state` by one tick: excitatory and inhibitory arrivals are
/// added to their currents first. Throws SimulationError on non-finite state.
bool lif_step(LifState& state, const LifParams& params, const LifPropagator& prop,
              std::span<const Arrival> arrivals, Tick tick);

/// Time Difference Encoder: a facilitatory spike arms a gain that decays with
/// tau_fac; trigger spikes inject weight * gain into the output neuron.
struct TdeState {
    bool facilitated = false;
    Tick last_fac_tick = 0;
    LifState lif;

    double gain(Tick tick, double tau_fac_ms) const
    {
        if (!facilitated) return 0.0;
        return std::exp(-ticks_to_ms(tick - last_fac_tick) / tau_fac_ms);
    }
};

bool tde_step(TdeState& state, const LifParams& params, const LifPropagator& prop, double tau_fac_ms,
              bool fac_arrival, std::span<const double> trig_weights_na, Tick tick);

}  // namespace semdnav::snn
