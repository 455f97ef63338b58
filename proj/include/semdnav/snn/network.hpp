#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "semdnav/snn/lif.hpp"

namespace semdnav::snn {

enum class NeuronModel : std::uint8_t { lif, tde, poisson, scheduled };

struct PopulationSpec {
    std::string name;
    NeuronModel model = NeuronModel::lif;
    std::uint32_t size = 0;
    LifParams lif;                            // lif, tde
    double tau_fac_ms = 10.0;                 // tde
    double rate_hz = 0.0;                     // poisson
    std::vector<std::vector<Tick>> schedule;  // scheduled: sorted spike ticks per neuron
};

struct NeuronRef {
    std::uint32_t pop = 0;
    std::uint32_t index = 0;
    friend bool operator==(const NeuronRef&, const NeuronRef&) = default;
};

struct Connection {
    NeuronRef source;
    NeuronRef target;
    double weight_na = 0.0;
    Tick delay_ticks = 1;
    SynapseKind kind = SynapseKind::excitatory;
};

struct NetworkSpec {
    std::vector<PopulationSpec> populations;
    std::vector<Connection> connections;
    std::uint64_t seed = 1;
    std::size_t max_pending = std::size_t{1} << 24;
    /// Mutation hook for the validation suite: TDE gain grows with the
    /// facilitation age instead of decaying.
    bool fault_tde_gain_grows = false;

    std::uint32_t add_population(PopulationSpec p)
    {
        populations.push_back(std::move(p));
        return static_cast<std::uint32_t>(populations.size() - 1);
    }
    void connect(NeuronRef src, NeuronRef dst, double weight_na, Tick delay_ticks, SynapseKind kind)
    {
        connections.push_back({src, dst, weight_na, delay_ticks, kind});
    }
    std::optional<std::uint32_t> find(const std::string& name) const;
};

struct SpikeEvent {
    Tick tick;
    std::uint32_t pop;
    std::uint32_t index;
    friend bool operator==(const SpikeEvent&, const SpikeEvent&) = default;
};

/// Spikes ordered by (tick, population, index).
struct SpikeRecord {
    std::vector<SpikeEvent> events;

    std::size_t count(std::uint32_t pop) const;
    std::vector<SpikeEvent> of(std::uint32_t pop) const;
    void append(const SpikeRecord& other) { events.insert(events.end(), other.events.begin(), other.events.end()); }
    /// CSV "tick,population,index" (population by name).
    void write_csv(std::ostream& os, const NetworkSpec& spec) const;
    friend bool operator==(const SpikeRecord&, const SpikeRecord&) = default;
};

/// Population ids to record; empty records everything.
using Recorders = std::vector<std::uint32_t>;

/// Deterministic fixed-step simulator. Per tick: due deliveries are applied,
/// sources emit, neurons advance, emitted spikes are queued with their
/// connection delays. Connections are stored as adjacency by source.
///
/// Neurons that provably cannot reach threshold without further input are
/// left dormant and brought forward with the closed-form solution when the
/// next arrival wakes them.
class Network {
public:
    /// Validates and builds; throws ConfigError naming the offending row.
    explicit Network(NetworkSpec spec);

    Tick now() const noexcept { return tick_; }
    const NetworkSpec& spec() const noexcept { return spec_; }

    void step();
    SpikeRecord run(Tick n_ticks, const Recorders& recorders = {});

    /// Queues an external spike arrival at `target` in `delay_ticks` ticks.
    void inject(NeuronRef target, double weight_na, SynapseKind kind, Tick delay_ticks = 1);

    /// Spikes (global ids order) emitted during the last step.
    std::span<const SpikeEvent> last_spikes() const noexcept { return last_spikes_; }
    std::uint64_t spike_count(std::uint32_t pop) const { return pop_spike_counts_.at(pop); }

    LifState state(NeuronRef n) const;
    double tde_gain(NeuronRef n) const;

    std::size_t neuron_count() const noexcept { return v_.size(); }
    std::size_t synapse_count() const noexcept { return spec_.connections.size(); }
    std::size_t pending_deliveries() const noexcept { return pending_; }

private:
    struct PopRuntime {
        std::uint32_t offset;
        std::uint32_t size;
        NeuronModel model;
        LifPropagator prop;
        double peak_psp_per_na = 0;       // max membrane excursion per nA of excitatory current
        bool can_sleep = false;
        std::vector<std::uint32_t> active;  // awake global ids
        bool active_dirty = false;          // active needs sorting
        // k-step propagators for waking dormant neurons, k < table size
        std::vector<double> pow_m, pow_exc, pow_inh, exc_to_v, inh_to_v;
    };
    struct Pending {
        std::uint32_t target;
        SynapseKind kind;
        double weight;
    };

    std::uint32_t global(NeuronRef n) const { return pops_[n.pop].offset + n.index; }
    void apply(const Pending& d);
    void wake(std::uint32_t g);
    bool dormant_ok(const PopRuntime& rt, const LifParams& p, std::uint32_t g) const;
    void sleep_or_keep(PopRuntime& rt, const LifParams& p);
    LifState propagated(std::uint32_t g, Tick to) const;
    void update_lif(std::uint32_t pop);
    void update_tde(std::uint32_t pop);
    void update_poisson(std::uint32_t pop);
    void update_scheduled(std::uint32_t pop);
    Tick draw_gap(std::uint32_t g, double p);

    NetworkSpec spec_;
    std::vector<PopRuntime> pops_;
    std::vector<std::uint32_t> pop_of_;

    // neuron state, indexed by global id
    std::vector<double> v_, i_exc_, i_inh_;
    std::vector<Tick> refractory_until_;
    std::vector<double> in_exc_, in_inh_, in_trig_;
    std::vector<std::uint8_t> in_fac_, facilitated_;
    std::vector<Tick> last_fac_;
    std::vector<std::uint8_t> awake_;
    std::vector<Tick> synced_;              // dormant: state valid at the start of this tick
    std::vector<Tick> next_spike_;          // poisson
    std::vector<std::size_t> sched_pos_;    // scheduled
    std::vector<std::uint32_t> rng_slot_;   // poisson: index into rng_
    std::vector<std::mt19937_64> rng_;      // one stream per Poisson source

    // outgoing adjacency (CSR by global source id)
    std::vector<std::uint32_t> out_begin_;
    std::vector<std::uint32_t> out_target_;
    std::vector<double> out_weight_;
    std::vector<std::uint32_t> out_delay_;
    std::vector<SynapseKind> out_kind_;

    std::vector<std::vector<Pending>> ring_;
    std::size_t pending_ = 0;

    std::vector<std::uint32_t> emitted_;
    std::vector<SpikeEvent> last_spikes_;
    std::vector<std::uint64_t> pop_spike_counts_;
    Tick tick_ = 0;
};

}  // namespace semdnav::snn
