#pragma once

#include "semdnav/snn/lif.hpp"

namespace semdnav::net {

// Per-population neuron constants (mV, pF, ms).

inline snn::LifParams make_lif(double e_l, double c_m, double tau_m, double t_ref, double tau_exc, double tau_inh,
                               double v_th, double v_reset, double v_init)
{
    snn::LifParams p;
    p.e_l_mv = e_l;
    p.c_m_pf = c_m;
    p.tau_m_ms = tau_m;
    p.t_ref_ms = t_ref;
    p.tau_syn_exc_ms = tau_exc;
    p.tau_syn_inh_ms = tau_inh;
    p.v_th_mv = v_th;
    p.v_reset_mv = v_reset;
    p.v_init_mv = v_init;
    return p;
}

inline snn::LifParams sptc_params() { return make_lif(-60.5, 25, 20, 1, 10, 10, -60, -60.5, -60.5); }
inline snn::LifParams tde_params() { return make_lif(-60.0, 250, 10, 1, 10, 10, -30, -85, -60); }
inline snn::LifParams int_params() { return make_lif(-70, 250, 20, 1, 5, 5, -40, -70, -65); }
inline snn::LifParams wta_params() { return make_lif(-65, 250, 20, 1, 5, 80, -50, -68, -65); }
inline snn::LifParams mot_params() { return make_lif(-65, 250, 20, 2, 5, 5, -50, -68, -65); }
inline snn::LifParams gi_params() { return make_lif(-65, 250, 30, 2, 40, 5, -50, -68, -65); }
inline snn::LifParams ofi_params() { return make_lif(-80, 250, 200, 1, 100, 30, -40, -80, -75); }
inline snn::LifParams et_params() { return make_lif(-65, 250, 20, 1, 5, 80, -50, -68, -65); }

inline constexpr double kPoissonRateHz = 100.0;

}  // namespace semdnav::net
