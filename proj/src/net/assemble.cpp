#include "semdnav/net/assemble.hpp"

#include <algorithm>
#include <functional>
#include <ostream>

#include "semdnav/errors.hpp"

namespace semdnav::net {

using snn::Connection;
using snn::NeuronModel;
using snn::PopulationSpec;
using snn::SynapseKind;

namespace {

PopulationSpec lif(const char* name, std::uint32_t n, const snn::LifParams& p)
{
    PopulationSpec s;
    s.name = name;
    s.size = n;
    s.lif = p;
    return s;
}

PopulationSpec poisson(const char* name, std::uint32_t n, double rate)
{
    PopulationSpec s;
    s.name = name;
    s.model = NeuronModel::poisson;
    s.size = n;
    s.rate_hz = rate;
    return s;
}

SynapseKind sign_kind(double w) { return w < 0 ? SynapseKind::inhibitory : SynapseKind::excitatory; }

class Wiring {
public:
    Wiring(Assembly& a) : a_(a) {}

    // Runs one wiring row and records how many connections it produced.
    void row(const std::string& name, std::uint32_t src, std::uint32_t dst, const std::function<void()>& body)
    {
        const std::size_t before = a_.spec.connections.size();
        body();
        const std::size_t made = a_.spec.connections.size() - before;
        a_.rows.push_back({name, made});
        if (made == 0 && size(src) > 0 && size(dst) > 0)
            throw ConfigError("wiring row '" + name + "' realised no connection");
    }

    void add(std::uint32_t sp, std::uint32_t si, std::uint32_t dp, std::uint32_t di, double w, snn::Tick d,
             SynapseKind k)
    {
        a_.spec.connections.push_back({{sp, si}, {dp, di}, w, d, k});
    }

    void all_to_all(std::uint32_t sp, std::uint32_t dp, double w, snn::Tick d)
    {
        for (std::uint32_t i = 0; i < size(sp); ++i)
            for (std::uint32_t j = 0; j < size(dp); ++j) add(sp, i, dp, j, w, d, sign_kind(w));
    }

    void one_to_one(std::uint32_t sp, std::uint32_t dp, double w, snn::Tick d)
    {
        for (std::uint32_t i = 0; i < std::min(size(sp), size(dp)); ++i) add(sp, i, dp, i, w, d, sign_kind(w));
    }

    std::uint32_t size(std::uint32_t p) const { return a_.spec.populations[p].size; }

private:
    Assembly& a_;
};

// Ticks from an arrival of `weight_na` at a resting neuron to its spike;
// -1 when it never fires.
snn::Tick spike_latency(const snn::LifParams& p, double weight_na)
{
    const auto prop = snn::LifPropagator::make(p);
    snn::LifState s = snn::LifState::initial(p);
    const snn::Arrival in[] = {{weight_na, SynapseKind::excitatory}};
    for (snn::Tick t = 0; t < snn::ms_to_ticks(100.0); ++t)
        if (snn::lif_step(s, p, prop, t == 0 ? std::span<const snn::Arrival>(in) : std::span<const snn::Arrival>(), t))
            return t;
    return -1;
}

}  // namespace

snn::Tick mot_wave_delay_ticks(const NetConfig& cfg)
{
    const snn::Tick hop = snn::ms_to_ticks(cfg.delays.mot_wave_ms);
    const snn::Tick lat = spike_latency(cfg.neurons.mot, cfg.weights.mot_wave);
    return std::max<snn::Tick>(1, hop - std::max<snn::Tick>(0, lat));
}

Assembly assemble(const NetConfig& cfg)
{
    cfg.validate();
    Assembly a;
    auto& spec = a.spec;
    spec.seed = cfg.seed;
    spec.max_pending = cfg.max_pending;
    const auto& s = cfg.sizes;
    const auto& n = cfg.neurons;
    const auto& w = cfg.weights;
    const std::uint32_t grid = s.columns * s.rows;

    auto& id = a.ids;
    id.sptc = spec.add_population(lif("SPTC", grid, n.sptc));
    PopulationSpec tde = lif("TDE_LR", grid, n.tde);
    tde.model = NeuronModel::tde;
    tde.tau_fac_ms = cfg.tau_fac_ms;
    id.tde_lr = spec.add_population(tde);
    tde.name = "TDE_RL";
    id.tde_rl = spec.add_population(tde);
    id.int_lr = spec.add_population(lif("INT_LR", s.columns, n.integ));
    id.int_rl = spec.add_population(lif("INT_RL", s.columns, n.integ));
    id.wta = spec.add_population(lif("WTA", s.wta, n.wta));
    id.gi = spec.add_population(lif("GI", s.gi, n.gi));
    id.et = spec.add_population(lif("ET", s.et, n.et));
    id.ofi = spec.add_population(lif("OFI", s.ofi, n.ofi));
    id.mot1 = spec.add_population(lif("MOT1", s.mot, n.mot));
    id.mot2 = spec.add_population(lif("MOT2", s.mot, n.mot));
    id.pois1 = spec.add_population(poisson("POIS1", s.pois1, cfg.pois1_rate_hz));
    id.pois2 = spec.add_population(poisson("POIS2", s.pois2, cfg.pois2_rate_hz));

    const snn::Tick d = snn::ms_to_ticks(cfg.delays.synapse_ms);
    const snn::Tick d_wave = mot_wave_delay_ticks(cfg);
    const snn::Tick d_rec = snn::ms_to_ticks(cfg.delays.wta_recurrent_ms);
    Wiring wire(a);

    // Motion detectors: left-right units are armed by column c and triggered
    // by c + 1; right-left units the other way round. The last column has no
    // right neighbour and stays unconnected.
    auto tde_rows = [&](std::uint32_t pop, bool left_right, SynapseKind kind) {
        for (std::uint32_t r = 0; r < s.rows; ++r)
            for (std::uint32_t c = 0; c + 1 < s.columns; ++c) {
                const std::uint32_t here = r * s.columns + c;
                const bool from_here = (kind == SynapseKind::facilitatory) == left_right;
                wire.add(id.sptc, from_here ? here : here + 1, pop, here, w.sptc_tde, d, kind);
            }
    };
    wire.row("SPTC->TDE_LR facilitator", id.sptc, id.tde_lr, [&] { tde_rows(id.tde_lr, true, SynapseKind::facilitatory); });
    wire.row("SPTC->TDE_LR trigger", id.sptc, id.tde_lr, [&] { tde_rows(id.tde_lr, true, SynapseKind::trigger); });
    wire.row("SPTC->TDE_RL facilitator", id.sptc, id.tde_rl, [&] { tde_rows(id.tde_rl, false, SynapseKind::facilitatory); });
    wire.row("SPTC->TDE_RL trigger", id.sptc, id.tde_rl, [&] { tde_rows(id.tde_rl, false, SynapseKind::trigger); });

    auto tde_int = [&](std::uint32_t src, std::uint32_t dst) {
        for (std::uint32_t i = 0; i < grid; ++i) wire.add(src, i, dst, i % s.columns, w.tde_int, d, SynapseKind::excitatory);
    };
    wire.row("TDE_LR->INT_LR", id.tde_lr, id.int_lr, [&] { tde_int(id.tde_lr, id.int_lr); });
    wire.row("TDE_RL->INT_RL", id.tde_rl, id.int_rl, [&] { tde_int(id.tde_rl, id.int_rl); });

    auto int_wta = [&](std::uint32_t src) {
        const auto cols = static_cast<int>(std::min(s.columns, s.wta));
        for (int i = 0; i < cols; ++i)
            for (int k = -static_cast<int>(cfg.n_connect); k <= static_cast<int>(cfg.n_connect); ++k) {
                const int j = i + k;
                if (j < 0 || j >= cols) continue;
                const double wk = cfg.flank_weight(static_cast<std::uint32_t>(std::abs(k)));
                wire.add(src, static_cast<std::uint32_t>(i), id.wta, static_cast<std::uint32_t>(j), wk, d, sign_kind(wk));
            }
    };
    wire.row("INT_LR->WTA", id.int_lr, id.wta, [&] { int_wta(id.int_lr); });
    wire.row("INT_RL->WTA", id.int_rl, id.wta, [&] { int_wta(id.int_rl); });
    wire.row("INT_LR->OFI", id.int_lr, id.ofi, [&] { wire.all_to_all(id.int_lr, id.ofi, w.int_ofi, d); });
    wire.row("INT_RL->OFI", id.int_rl, id.ofi, [&] { wire.all_to_all(id.int_rl, id.ofi, w.int_ofi, d); });

    // Winner position to motor wave entry point; the wave runs to index 95.
    wire.row("WTA->MOT1", id.wta, id.mot1, [&] {
        if (!s.mot) return;
        for (std::uint32_t i = 0; i < 32; ++i)
            wire.add(id.wta, i, id.mot1, i <= 8 ? 50 : 2 * i + 32, w.wta_mot, d, SynapseKind::excitatory);
    });
    wire.row("WTA->MOT2", id.wta, id.mot2, [&] {
        if (!s.mot) return;
        for (std::uint32_t i = 32; i < 64; ++i) {
            std::uint32_t k = 50;
            if (i <= 53) k = cfg.mot2_literal_mapping ? std::min(2 * i + 32, s.mot - 1) : 2 * (63 - i) + 32;
            wire.add(id.wta, i, id.mot2, k, w.wta_mot, d, SynapseKind::excitatory);
        }
    });
    wire.row("WTA->GI", id.wta, id.gi, [&] { wire.all_to_all(id.wta, id.gi, w.wta_gi, d); });
    wire.row("WTA->WTA recurrent", id.wta, id.wta, [&] {
        for (std::uint32_t i = 0; i < s.wta; ++i)
            for (int k = -1; k <= 1; ++k) {
                const long j = static_cast<long>(i) + k;
                if (j >= 0 && j < static_cast<long>(s.wta))
                    wire.add(id.wta, i, id.wta, static_cast<std::uint32_t>(j), w.wta_recurrent, d_rec, SynapseKind::excitatory);
            }
    });
    wire.row("ET->MOT1", id.et, id.mot1, [&] {
        if (s.et) wire.add(id.et, 0, id.mot1, 0, w.et_mot, d, SynapseKind::excitatory);
    });
    wire.row("ET->GI", id.et, id.gi, [&] { wire.all_to_all(id.et, id.gi, w.et_gi, d); });
    wire.row("GI->ET", id.gi, id.et, [&] { wire.all_to_all(id.gi, id.et, w.gi_et, d); });
    wire.row("GI->WTA", id.gi, id.wta, [&] { wire.all_to_all(id.gi, id.wta, w.gi_wta, d); });

    for (const auto& [mot, other, name] :
         {std::tuple{id.mot1, id.mot2, std::string("MOT1")}, std::tuple{id.mot2, id.mot1, std::string("MOT2")}}) {
        wire.row(name + "->WTA", mot, id.wta, [&] { wire.all_to_all(mot, id.wta, w.mot_wta, d); });
        wire.row(name + "->ET", mot, id.et, [&] { wire.all_to_all(mot, id.et, w.mot_et, d); });
        wire.row(name + "->" + (other == id.mot1 ? "MOT1" : "MOT2"), mot, other,
                 [&] { wire.all_to_all(mot, other, w.mot_cross, d); });
        wire.row(name + "->SPTC", mot, id.sptc, [&] { wire.all_to_all(mot, id.sptc, w.mot_sptc, d); });
        wire.row(name + " wave", mot, mot, [&] {
            for (std::uint32_t i = 0; i + 1 < s.mot; ++i)
                wire.add(mot, i, mot, i + 1, w.mot_wave, d_wave, SynapseKind::excitatory);
        });
        wire.row(name + " self-inhibition", mot, mot, [&] { wire.one_to_one(mot, mot, w.mot_self, d); });
    }

    wire.row("POIS1->WTA", id.pois1, id.wta, [&] { wire.one_to_one(id.pois1, id.wta, w.pois1_wta, d); });
    wire.row("POIS2->ET", id.pois2, id.et,
             [&] { wire.one_to_one(id.pois2, id.et, w.pois2_et * w.pois2_et_scale, d); });
    return a;
}

SptcInput map_events_to_sptc(const std::vector<vision::CameraEvent>& events, const NetSizes& sizes)
{
    SptcInput in;
    in.targets.reserve(events.size());
    for (const auto& e : events) {
        const std::uint32_t c = e.x / 2u, r = e.y / 2u;
        if (c >= sizes.columns || r >= sizes.rows) {
            ++in.rejected;
            continue;
        }
        in.targets.push_back(r * sizes.columns + c);
    }
    return in;
}

void write_wiring_csv(std::ostream& os, const snn::NetworkSpec& spec)
{
    os << "src_pop,src_idx,dst_pop,dst_idx,weight_nA,delay_ms,kind\n";
    for (const auto& c : spec.connections) {
        os << spec.populations[c.source.pop].name << ',' << c.source.index << ','
           << spec.populations[c.target.pop].name << ',' << c.target.index << ',' << c.weight_na << ','
           << snn::ticks_to_ms(c.delay_ticks) << ',' << snn::to_string(c.kind) << '\n';
    }
}

}  // namespace semdnav::net
