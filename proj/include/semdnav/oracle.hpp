#pragma once

// Independent reference for the LIF kernel: the same ODE integrated with an
// adaptive Dormand-Prince 5(4) scheme, sharing only the parameter struct.

#include <algorithm>
#include <array>
#include <cmath>
#include <vector>

#include "semdnav/snn/lif.hpp"

namespace semdnav::oracle {

struct Arrival {
    long tick;
    double weight_na;  // sign selects the current
};

class LifOde {
public:
    explicit LifOde(const semdnav::snn::LifParams& p) : p_(p), y_{p.v_init_mv, 0.0, 0.0} {}

    // Advances one 0.1 ms tick; arrivals for this tick are added first.
    // Returns true on a threshold crossing at the end of the tick.
    bool step(long tick, double add_exc, double add_inh)
    {
        y_[1] += add_exc;
        y_[2] += add_inh;
        integrate(semdnav::snn::kDtMs);
        if (tick < refractory_until_) {
            y_[0] = p_.v_reset_mv;
            return false;
        }
        if (y_[0] >= p_.v_th_mv) {
            y_[0] = p_.v_reset_mv;
            refractory_until_ = tick + std::lround(p_.t_ref_ms / semdnav::snn::kDtMs);
            return true;
        }
        return false;
    }

    double v() const { return y_[0]; }

private:
    using State = std::array<double, 3>;

    State deriv(const State& y) const
    {
        return {-(y[0] - p_.e_l_mv) / p_.tau_m_ms + (y[1] + y[2] + p_.i_offset_na) * 1000.0 / p_.c_m_pf,
                -y[1] / p_.tau_syn_exc_ms, -y[2] / p_.tau_syn_inh_ms};
    }

    void integrate(double span)
    {
        static constexpr double a21 = 1.0 / 5, a31 = 3.0 / 40, a32 = 9.0 / 40, a41 = 44.0 / 45, a42 = -56.0 / 15,
                                a43 = 32.0 / 9, a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                                a54 = -212.0 / 729, a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                                a64 = 49.0 / 176, a65 = -5103.0 / 18656, b1 = 35.0 / 384, b3 = 500.0 / 1113,
                                b4 = 125.0 / 192, b5 = -2187.0 / 6784, b6 = 11.0 / 84, e1 = 71.0 / 57600,
                                e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200, e6 = 22.0 / 525,
                                e7 = -1.0 / 40;
        double t = 0.0;
        double h = std::min(h_, span);
        while (t < span) {
            h = std::min(h, span - t);
            auto at = [&](std::initializer_list<std::pair<double, const State*>> terms) {
                State r = y_;
                for (auto [c, k] : terms)
                    for (int i = 0; i < 3; ++i) r[i] += h * c * (*k)[i];
                return r;
            };
            const State k1 = deriv(y_);
            const State k2 = deriv(at({{a21, &k1}}));
            const State k3 = deriv(at({{a31, &k1}, {a32, &k2}}));
            const State k4 = deriv(at({{a41, &k1}, {a42, &k2}, {a43, &k3}}));
            const State k5 = deriv(at({{a51, &k1}, {a52, &k2}, {a53, &k3}, {a54, &k4}}));
            const State k6 = deriv(at({{a61, &k1}, {a62, &k2}, {a63, &k3}, {a64, &k4}, {a65, &k5}}));
            const State y5 = at({{b1, &k1}, {b3, &k3}, {b4, &k4}, {b5, &k5}, {b6, &k6}});
            const State k7 = deriv(y5);
            double err = 0.0;
            for (int i = 0; i < 3; ++i) {
                const double ei = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
                const double sc = 1e-12 + 1e-10 * std::max(std::abs(y_[i]), std::abs(y5[i]));
                err = std::max(err, std::abs(ei) / sc);
            }
            if (err <= 1.0) {
                t += h;
                y_ = y5;
            }
            h *= std::clamp(0.9 * std::pow(std::max(err, 1e-10), -0.2), 0.2, 5.0);
        }
        h_ = h;
    }

    semdnav::snn::LifParams p_;
    State y_;
    long refractory_until_ = 0;
    double h_ = 1e-3;
};

}  // namespace semdnav::oracle
