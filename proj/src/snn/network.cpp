#include "semdnav/snn/network.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <sstream>

#include "semdnav/errors.hpp"

namespace semdnav::snn {

std::optional<std::uint32_t> NetworkSpec::find(const std::string& name) const
{
    for (std::size_t i = 0; i < populations.size(); ++i)
        if (populations[i].name == name) return static_cast<std::uint32_t>(i);
    return std::nullopt;
}

std::size_t SpikeRecord::count(std::uint32_t pop) const
{
    return static_cast<std::size_t>(
        std::count_if(events.begin(), events.end(), [pop](const SpikeEvent& e) { return e.pop == pop; }));
}

std::vector<SpikeEvent> SpikeRecord::of(std::uint32_t pop) const
{
    std::vector<SpikeEvent> out;
    for (const auto& e : events)
        if (e.pop == pop) out.push_back(e);
    return out;
}

void SpikeRecord::write_csv(std::ostream& os, const NetworkSpec& spec) const
{
    os << "tick,population,index\n";
    for (const auto& e : events) {
        const std::string& name = e.pop < spec.populations.size() ? spec.populations[e.pop].name : std::string("?");
        os << e.tick << ',' << name << ',' << e.index << '\n';
    }
}

namespace {

bool is_source(NeuronModel m) { return m == NeuronModel::poisson || m == NeuronModel::scheduled; }

std::string describe(const NetworkSpec& spec, std::size_t row, const Connection& c)
{
    auto name = [&](const NeuronRef& r) {
        std::ostringstream os;
        if (r.pop < spec.populations.size())
            os << spec.populations[r.pop].name;
        else
            os << "#" << r.pop;
        os << "[" << r.index << "]";
        return os.str();
    };
    std::ostringstream os;
    os << "connection row " << row << " (" << name(c.source) << " -> " << name(c.target) << ", "
       << to_string(c.kind) << ", " << c.weight_na << " nA, " << c.delay_ticks << " ticks)";
    return os.str();
}

void validate_population(const PopulationSpec& p, std::size_t id)
{
    const std::string where = "population " + std::to_string(id) + " '" + p.name + "'";
    switch (p.model) {
    case NeuronModel::lif:
    case NeuronModel::tde:
        try {
            p.lif.validate();
        } catch (const ConfigError& e) {
            throw ConfigError(where + ": " + e.what());
        }
        if (p.model == NeuronModel::tde && !(p.tau_fac_ms > 0))
            throw ConfigError(where + ": tau_fac_ms must be > 0");
        break;
    case NeuronModel::poisson:
        if (!(p.rate_hz >= 0) || p.rate_hz * kDtMs * 1e-3 > 1.0)
            throw ConfigError(where + ": rate must lie in [0, 1/dt]");
        break;
    case NeuronModel::scheduled:
        if (p.schedule.size() != p.size) throw ConfigError(where + ": schedule needs one list per neuron");
        for (const auto& s : p.schedule) {
            if (!std::is_sorted(s.begin(), s.end())) throw ConfigError(where + ": schedule must be sorted");
            if (!s.empty() && s.front() < 0) throw ConfigError(where + ": negative schedule tick");
        }
        break;
    }
}

void validate_connection(const NetworkSpec& spec, std::size_t row, const Connection& c)
{
    auto fail = [&](const char* why) { throw ConfigError(describe(spec, row, c) + ": " + why); };
    const auto& pops = spec.populations;
    if (c.source.pop >= pops.size() || c.source.index >= pops[c.source.pop].size) fail("dangling source");
    if (c.target.pop >= pops.size() || c.target.index >= pops[c.target.pop].size) fail("dangling target");
    const NeuronModel tm = pops[c.target.pop].model;
    if (is_source(tm)) fail("target is a spike source");
    if ((c.kind == SynapseKind::facilitatory || c.kind == SynapseKind::trigger) && tm != NeuronModel::tde)
        fail("facilitatory/trigger synapse onto a non-TDE population");
    if (c.delay_ticks < 1) fail("delay must be >= 1 tick");
    if (!std::isfinite(c.weight_na)) fail("non-finite weight");
    if (c.kind == SynapseKind::inhibitory ? c.weight_na > 0 : c.weight_na < 0)
        fail("weight sign does not match synapse kind");
}

constexpr std::size_t kWakeTable = 4096;

// Largest membrane excursion caused by 1 nA of excitatory current decaying
// from the start of an interval, padded against rounding.
double peak_psp(const LifParams& p)
{
    const double ts = p.tau_syn_exc_ms, tm = p.tau_m_ms;
    const double t_star = std::abs(ts - tm) < 1e-12 ? tm : std::log(tm / ts) * ts * tm / (tm - ts);
    return current_to_voltage(ts, tm, p.c_m_pf, t_star) * (1.0 + 1e-9) + 1e-12;
}

// SplitMix64 finaliser; decorrelates per-source seeds.
std::uint64_t mix(std::uint64_t x)
{
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

}  // namespace

Network::Network(NetworkSpec spec) : spec_(std::move(spec))
{
    std::uint32_t total = 0;
    for (std::size_t p = 0; p < spec_.populations.size(); ++p) {
        const auto& ps = spec_.populations[p];
        validate_population(ps, p);
        PopRuntime rt;
        rt.offset = total;
        rt.size = ps.size;
        rt.model = ps.model;
        if (!is_source(ps.model)) {
            rt.prop = LifPropagator::make(ps.lif);
            rt.peak_psp_per_na = peak_psp(ps.lif);
            rt.can_sleep = ps.lif.i_offset_na == 0.0 && ps.lif.v_th_mv > ps.lif.e_l_mv;
            if (rt.can_sleep) {
                for (std::size_t k = 0; k < kWakeTable; ++k) {
                    const double h = static_cast<double>(k) * kDtMs;
                    rt.pow_m.push_back(std::exp(-h / ps.lif.tau_m_ms));
                    rt.pow_exc.push_back(std::exp(-h / ps.lif.tau_syn_exc_ms));
                    rt.pow_inh.push_back(std::exp(-h / ps.lif.tau_syn_inh_ms));
                    rt.exc_to_v.push_back(current_to_voltage(ps.lif.tau_syn_exc_ms, ps.lif.tau_m_ms, ps.lif.c_m_pf, h));
                    rt.inh_to_v.push_back(current_to_voltage(ps.lif.tau_syn_inh_ms, ps.lif.tau_m_ms, ps.lif.c_m_pf, h));
                }
            }
            for (std::uint32_t i = 0; i < ps.size; ++i) rt.active.push_back(total + i);
        }
        pops_.push_back(std::move(rt));
        total += ps.size;
    }
    for (std::size_t r = 0; r < spec_.connections.size(); ++r) validate_connection(spec_, r, spec_.connections[r]);

    pop_of_.resize(total);
    v_.assign(total, 0.0);
    i_exc_.assign(total, 0.0);
    i_inh_.assign(total, 0.0);
    refractory_until_.assign(total, 0);
    in_exc_.assign(total, 0.0);
    in_inh_.assign(total, 0.0);
    in_trig_.assign(total, 0.0);
    in_fac_.assign(total, 0);
    facilitated_.assign(total, 0);
    last_fac_.assign(total, 0);
    awake_.assign(total, 1);
    synced_.assign(total, 0);
    next_spike_.assign(total, -1);
    sched_pos_.assign(total, 0);
    rng_slot_.assign(total, 0);
    pop_spike_counts_.assign(pops_.size(), 0);

    for (std::uint32_t p = 0; p < pops_.size(); ++p) {
        const auto& ps = spec_.populations[p];
        for (std::uint32_t i = 0; i < ps.size; ++i) {
            const std::uint32_t g = pops_[p].offset + i;
            pop_of_[g] = p;
            if (!is_source(ps.model)) v_[g] = ps.lif.v_init_mv;
        }
        if (ps.model == NeuronModel::poisson) {
            const double prob = ps.rate_hz * kDtMs * 1e-3;
            for (std::uint32_t i = 0; i < ps.size; ++i) {
                const std::uint32_t g = pops_[p].offset + i;
                rng_slot_[g] = static_cast<std::uint32_t>(rng_.size());
                rng_.emplace_back(mix(spec_.seed ^ mix((std::uint64_t{p} << 32) | i)));
                next_spike_[g] = draw_gap(g, prob) - 1;
            }
        }
    }

    // CSR adjacency by global source id, stable in row order.
    const std::size_t n_conn = spec_.connections.size();
    out_begin_.assign(total + 1, 0);
    for (const auto& c : spec_.connections) ++out_begin_[global(c.source) + 1];
    for (std::size_t g = 0; g < total; ++g) out_begin_[g + 1] += out_begin_[g];
    out_target_.resize(n_conn);
    out_weight_.resize(n_conn);
    out_delay_.resize(n_conn);
    out_kind_.resize(n_conn);
    std::vector<std::uint32_t> fill(out_begin_.begin(), out_begin_.end() - 1);
    Tick max_delay = 1;
    for (const auto& c : spec_.connections) {
        const std::uint32_t k = fill[global(c.source)]++;
        out_target_[k] = global(c.target);
        out_weight_[k] = c.weight_na;
        out_delay_[k] = static_cast<std::uint32_t>(c.delay_ticks);
        out_kind_[k] = c.kind;
        max_delay = std::max(max_delay, c.delay_ticks);
    }
    ring_.resize(static_cast<std::size_t>(std::max<Tick>(max_delay, 64) + 1));
}

Tick Network::draw_gap(std::uint32_t g, double p)
{
    // Geometric inter-spike gap (>= 1 tick) by inversion: same law as a
    // Bernoulli(p) draw per tick.
    if (p <= 0) return std::numeric_limits<Tick>::max() / 2;
    if (p >= 1) return 1;
    const double u = 1.0 - std::generate_canonical<double, 53>(rng_[rng_slot_[g]]);  // (0, 1]
    return 1 + static_cast<Tick>(std::floor(std::log(u) / std::log1p(-p)));
}

void Network::inject(NeuronRef target, double weight_na, SynapseKind kind, Tick delay_ticks)
{
    if (target.pop >= pops_.size() || target.index >= pops_[target.pop].size)
        throw ConfigError("inject: target out of range");
    if (is_source(pops_[target.pop].model)) throw ConfigError("inject: target is a spike source");
    if (delay_ticks < 1 || static_cast<std::size_t>(delay_ticks) >= ring_.size())
        throw ConfigError("inject: delay outside [1, " + std::to_string(ring_.size() - 1) + "]");
    if ((kind == SynapseKind::facilitatory || kind == SynapseKind::trigger) &&
        pops_[target.pop].model != NeuronModel::tde)
        throw ConfigError("inject: facilitatory/trigger input onto a non-TDE population");
    if (kind == SynapseKind::inhibitory ? weight_na > 0 : weight_na < 0)
        throw ConfigError("inject: weight sign does not match synapse kind");
    ring_[static_cast<std::size_t>((tick_ + delay_ticks) % static_cast<Tick>(ring_.size()))].push_back(
        {global(target), kind, weight_na});
    if (++pending_ > spec_.max_pending) throw SimulationError("pending-delivery queue overflow");
}

void Network::apply(const Pending& d)
{
    const std::uint32_t g = d.target;
    if (!awake_[g]) wake(g);
    switch (d.kind) {
    case SynapseKind::excitatory: in_exc_[g] += d.weight; break;
    case SynapseKind::inhibitory: in_inh_[g] += d.weight; break;
    case SynapseKind::facilitatory: in_fac_[g] = 1; break;
    case SynapseKind::trigger: in_trig_[g] += d.weight; break;
    }
}

LifState Network::propagated(std::uint32_t g, Tick to) const
{
    LifState s{v_[g], i_exc_[g], i_inh_[g], refractory_until_[g]};
    if (awake_[g]) return s;
    const auto& rt = pops_[pop_of_[g]];
    const LifParams& p = spec_.populations[pop_of_[g]].lif;
    const Tick k = to - synced_[g];
    if (k <= 0) return s;
    const double y = s.v_m - p.e_l_mv;
    double pm, pe, pi, ev, iv;
    if (static_cast<std::size_t>(k) < rt.pow_m.size()) {
        const auto i = static_cast<std::size_t>(k);
        pm = rt.pow_m[i], pe = rt.pow_exc[i], pi = rt.pow_inh[i], ev = rt.exc_to_v[i], iv = rt.inh_to_v[i];
    } else {
        const double h = ticks_to_ms(k);
        pm = std::exp(-h / p.tau_m_ms);
        pe = std::exp(-h / p.tau_syn_exc_ms);
        pi = std::exp(-h / p.tau_syn_inh_ms);
        ev = current_to_voltage(p.tau_syn_exc_ms, p.tau_m_ms, p.c_m_pf, h);
        iv = current_to_voltage(p.tau_syn_inh_ms, p.tau_m_ms, p.c_m_pf, h);
    }
    s.v_m = p.e_l_mv + y * pm + s.i_exc * ev + s.i_inh * iv;
    s.i_exc *= pe;
    s.i_inh *= pi;
    return s;
}

void Network::wake(std::uint32_t g)
{
    const LifState s = propagated(g, tick_);
    v_[g] = s.v_m;
    i_exc_[g] = s.i_exc;
    i_inh_[g] = s.i_inh;
    awake_[g] = 1;
    auto& rt = pops_[pop_of_[g]];
    rt.active.push_back(g);
    rt.active_dirty = true;
}

bool Network::dormant_ok(const PopRuntime& rt, const LifParams& p, std::uint32_t g) const
{
    // Without new input V never exceeds E_L + max(y, 0) + I_exc * peak; the
    // inhibitory current only lowers it.
    if (refractory_until_[g] > tick_ + 1) return false;
    const double bound = std::max(v_[g] - p.e_l_mv, 0.0) + i_exc_[g] * rt.peak_psp_per_na;
    return bound < (p.v_th_mv - p.e_l_mv) * (1.0 - 1e-9);
}

void Network::sleep_or_keep(PopRuntime& rt, const LifParams& p)
{
    if (!rt.can_sleep) return;
    std::size_t keep = 0;
    for (std::uint32_t g : rt.active) {
        if (dormant_ok(rt, p, g)) {
            awake_[g] = 0;
            synced_[g] = tick_ + 1;
        } else {
            rt.active[keep++] = g;
        }
    }
    rt.active.resize(keep);
}

void Network::update_poisson(std::uint32_t pop)
{
    const auto& rt = pops_[pop];
    const double prob = spec_.populations[pop].rate_hz * kDtMs * 1e-3;
    for (std::uint32_t g = rt.offset; g < rt.offset + rt.size; ++g) {
        if (next_spike_[g] != tick_) continue;
        emitted_.push_back(g);
        next_spike_[g] = tick_ + draw_gap(g, prob);
    }
}

void Network::update_scheduled(std::uint32_t pop)
{
    const auto& rt = pops_[pop];
    const auto& sched = spec_.populations[pop].schedule;
    for (std::uint32_t i = 0; i < rt.size; ++i) {
        const std::uint32_t g = rt.offset + i;
        const auto& s = sched[i];
        auto& pos = sched_pos_[g];
        while (pos < s.size() && s[pos] < tick_) ++pos;
        if (pos < s.size() && s[pos] == tick_) {
            emitted_.push_back(g);
            while (pos < s.size() && s[pos] == tick_) ++pos;
        }
    }
}

void Network::update_lif(std::uint32_t pop)
{
    auto& rt = pops_[pop];
    const LifParams& p = spec_.populations[pop].lif;
    if (rt.active_dirty) {
        std::sort(rt.active.begin(), rt.active.end());
        rt.active_dirty = false;
    }
    double check = 0.0;
    for (std::uint32_t g : rt.active) {
        double ie = i_exc_[g] + in_exc_[g];
        double ii = i_inh_[g] + in_inh_[g];
        in_exc_[g] = 0.0;
        in_inh_[g] = 0.0;
        if (lif_advance(v_[g], ie, ii, refractory_until_[g], tick_, p, rt.prop)) emitted_.push_back(g);
        i_exc_[g] = ie;
        i_inh_[g] = ii;
        check += v_[g] + ie + ii;
    }
    if (!std::isfinite(check))
        throw SimulationError("non-finite membrane state in population '" + spec_.populations[pop].name + "'");
    sleep_or_keep(rt, p);
}

void Network::update_tde(std::uint32_t pop)
{
    auto& rt = pops_[pop];
    const auto& ps = spec_.populations[pop];
    const LifParams& p = ps.lif;
    const double inv_tau = (spec_.fault_tde_gain_grows ? -kDtMs : kDtMs) / ps.tau_fac_ms;
    if (rt.active_dirty) {
        std::sort(rt.active.begin(), rt.active.end());
        rt.active_dirty = false;
    }
    double check = 0.0;
    for (std::uint32_t g : rt.active) {
        if (in_fac_[g]) {
            facilitated_[g] = 1;
            last_fac_[g] = tick_;
            in_fac_[g] = 0;
        }
        double ie = i_exc_[g] + in_exc_[g];
        if (in_trig_[g] != 0.0) {
            if (facilitated_[g]) ie += in_trig_[g] * std::exp(-static_cast<double>(tick_ - last_fac_[g]) * inv_tau);
            in_trig_[g] = 0.0;
        }
        double ii = i_inh_[g] + in_inh_[g];
        in_exc_[g] = 0.0;
        in_inh_[g] = 0.0;
        if (lif_advance(v_[g], ie, ii, refractory_until_[g], tick_, p, rt.prop)) emitted_.push_back(g);
        i_exc_[g] = ie;
        i_inh_[g] = ii;
        check += v_[g] + ie + ii;
    }
    if (!std::isfinite(check)) throw SimulationError("non-finite membrane state in population '" + ps.name + "'");
    sleep_or_keep(rt, p);
}

void Network::step()
{
    const Tick ring = static_cast<Tick>(ring_.size());
    auto& due = ring_[static_cast<std::size_t>(tick_ % ring)];
    for (const auto& d : due) apply(d);
    pending_ -= due.size();
    due.clear();

    emitted_.clear();
    for (std::uint32_t p = 0; p < pops_.size(); ++p) {
        switch (pops_[p].model) {
        case NeuronModel::poisson: update_poisson(p); break;
        case NeuronModel::scheduled: update_scheduled(p); break;
        case NeuronModel::lif: update_lif(p); break;
        case NeuronModel::tde: update_tde(p); break;
        }
    }

    last_spikes_.clear();
    for (std::uint32_t g : emitted_) {
        const std::uint32_t p = pop_of_[g];
        last_spikes_.push_back({tick_, p, g - pops_[p].offset});
        ++pop_spike_counts_[p];
        const std::uint32_t b = out_begin_[g], e = out_begin_[g + 1];
        for (std::uint32_t k = b; k < e; ++k)
            ring_[static_cast<std::size_t>((tick_ + out_delay_[k]) % ring)].push_back(
                {out_target_[k], out_kind_[k], out_weight_[k]});
        pending_ += e - b;
    }
    if (pending_ > spec_.max_pending) throw SimulationError("pending-delivery queue overflow");
    ++tick_;
}

SpikeRecord Network::run(Tick n_ticks, const Recorders& recorders)
{
    if (n_ticks < 0) throw ConfigError("run: n_ticks must be >= 0");
    std::vector<std::uint8_t> keep(pops_.size(), recorders.empty() ? 1 : 0);
    for (auto p : recorders) {
        if (p >= pops_.size()) throw ConfigError("run: recorder population out of range");
        keep[p] = 1;
    }
    SpikeRecord rec;
    for (Tick t = 0; t < n_ticks; ++t) {
        step();
        for (const auto& s : last_spikes_)
            if (keep[s.pop]) rec.events.push_back(s);
    }
    return rec;
}

LifState Network::state(NeuronRef n) const
{
    if (n.pop >= pops_.size() || n.index >= pops_[n.pop].size) throw ConfigError("state: neuron out of range");
    return propagated(global(n), tick_);
}

double Network::tde_gain(NeuronRef n) const
{
    if (n.pop >= pops_.size() || pops_[n.pop].model != NeuronModel::tde || n.index >= pops_[n.pop].size)
        throw ConfigError("tde_gain: not a TDE neuron");
    const std::uint32_t g = global(n);
    if (!facilitated_[g]) return 0.0;
    return std::exp(-ticks_to_ms(tick_ - last_fac_[g]) / spec_.populations[n.pop].tau_fac_ms);
}

}  // namespace semdnav::snn
