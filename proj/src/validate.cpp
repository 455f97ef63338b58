#include "semdnav/validate.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "semdnav/errors.hpp"
#include "semdnav/net/assemble.hpp"
#include "semdnav/oracle.hpp"
#include "semdnav/vision/camera.hpp"
#include "semdnav/world/batch.hpp"

namespace semdnav::validate {

using snn::Tick;

const char* to_string(Fault f)
{
    switch (f) {
    case Fault::none: return "none";
    case Fault::tde_gain_grows: return "tde_gain_grows";
    case Fault::no_mot_wta_inhibition: return "no_mot_wta_inhibition";
    }
    return "?";
}

Fault fault_from_string(const std::string& s)
{
    for (auto f : {Fault::none, Fault::tde_gain_grows, Fault::no_mot_wta_inhibition})
        if (s == to_string(f)) return f;
    throw ConfigError("fault: unknown value '" + s + "'");
}

namespace {

net::NetConfig faulty(net::NetConfig cfg, Fault f)
{
    if (f == Fault::no_mot_wta_inhibition) cfg.weights.mot_wta = 0.0;
    return cfg;
}

snn::NetworkSpec faulty(snn::NetworkSpec spec, Fault f)
{
    spec.fault_tde_gain_grows = f == Fault::tde_gain_grows;
    return spec;
}

world::EpisodeConfig faulty(world::EpisodeConfig cfg, Fault f)
{
    cfg.network = faulty(cfg.network, f);
    return cfg;
}

std::string fmt(const char* f, double a, double b = 0, double c = 0)
{
    char buf[256];
    std::snprintf(buf, sizeof buf, f, a, b, c);
    return buf;
}

CheckResult result(const char* name, bool ok, std::string detail) { return {name, ok, std::move(detail)}; }

snn::PopulationSpec scheduled(const char* name, std::vector<std::vector<Tick>> s)
{
    snn::PopulationSpec p;
    p.name = name;
    p.model = snn::NeuronModel::scheduled;
    p.size = static_cast<std::uint32_t>(s.size());
    p.schedule = std::move(s);
    return p;
}

// Closed-loop corridor run with the motor, WTA and SPTC layers recorded.
world::EpisodeResult motor_episode(const Options& opt)
{
    world::EnvSpec env;
    env.kind = world::EnvKind::corridor;
    world::EpisodeConfig cfg = faulty(opt.episode, opt.fault);
    cfg.budget_s = opt.episode_s;
    cfg.network.seed = opt.seed;
    cfg.record_populations = {"SPTC", "WTA", "MOT1", "MOT2"};
    return world::run_episode(world::generate_environment(env, opt.seed), cfg);
}

struct Interval {
    Tick begin, end;  // inclusive
};

// Maximal runs of motor spikes with no gap longer than 20 ms.
std::vector<Interval> motor_intervals(const world::EpisodeResult& r)
{
    const auto m1 = *r.network_spec.find("MOT1"), m2 = *r.network_spec.find("MOT2");
    std::vector<Interval> out;
    const Tick gap = snn::ms_to_ticks(20.0);
    for (const auto& s : r.spikes.events) {
        if (s.pop != m1 && s.pop != m2) continue;
        if (!out.empty() && s.tick - out.back().end <= gap) out.back().end = s.tick;
        else out.push_back({s.tick, s.tick});
    }
    return out;
}

}  // namespace

CheckResult check_kernel_oracle(const Options& opt)
{
    const net::NetNeurons n = opt.episode.network.neurons;
    const std::vector<snn::LifParams> sets = {n.sptc, n.tde, n.integ, n.wta, n.mot, n.gi, n.ofi, n.et};
    std::mt19937_64 rng(opt.seed);
    const Tick span = snn::ms_to_ticks(opt.oracle_span_ms);
    double worst = 0.0;
    int spike_mismatch = 0;
    for (int seq = 0; seq < opt.oracle_sequences; ++seq) {
        snn::LifParams p = sets[static_cast<std::size_t>(seq) % sets.size()];
        // Scale arrivals to the capacitance so every set is driven near threshold.
        const double scale = p.c_m_pf / 250.0;
        std::uniform_real_distribution<double> weight(-1.5 * scale, 3.0 * scale);
        std::bernoulli_distribution arrive(0.03);
        std::vector<double> exc(static_cast<std::size_t>(span + 1), 0.0), inh(exc);
        for (Tick t = 1; t <= span; ++t)
            if (arrive(rng)) {
                const double w = weight(rng);
                (w < 0 ? inh : exc)[static_cast<std::size_t>(t)] += w;
            }

        snn::NetworkSpec spec;
        snn::PopulationSpec pop;
        pop.name = "N";
        pop.size = 1;
        pop.lif = p;
        const auto id = spec.add_population(pop);
        snn::Network net(spec);
        oracle::LifOde ode(p);
        for (Tick t = 0; t < span; ++t) {
            const auto next = static_cast<std::size_t>(t + 1);
            if (exc[next] != 0.0) net.inject({id, 0}, exc[next], snn::SynapseKind::excitatory, 1);
            if (inh[next] != 0.0) net.inject({id, 0}, inh[next], snn::SynapseKind::inhibitory, 1);
            net.step();
            const bool k = !net.last_spikes().empty();
            const bool o = ode.step(t, exc[static_cast<std::size_t>(t)], inh[static_cast<std::size_t>(t)]);
            if (k != o) ++spike_mismatch;
            worst = std::max(worst, std::abs(net.state({id, 0}).v_m - ode.v()));
        }
    }
    return result("kernel_oracle", worst <= 0.1 && spike_mismatch == 0,
                  fmt("max |dV| %.3g mV, %.0f spike mismatches over %.0f sequences", worst, spike_mismatch,
                      opt.oracle_sequences));
}

CheckResult check_tde_monotonicity(const Options& opt)
{
    const auto& cfg = opt.episode.network;
    auto burst = [&](double dt_ms) {
        snn::NetworkSpec spec;
        const Tick t0 = snn::ms_to_ticks(10.0);
        const Tick fac = dt_ms >= 0 ? t0 : t0 + snn::ms_to_ticks(-dt_ms);
        const Tick trig = dt_ms >= 0 ? t0 + snn::ms_to_ticks(dt_ms) : t0;
        const auto f = spec.add_population(scheduled("FAC", {{fac}}));
        const auto g = spec.add_population(scheduled("TRIG", {{trig}}));
        snn::PopulationSpec tde;
        tde.name = "TDE";
        tde.model = snn::NeuronModel::tde;
        tde.size = 1;
        tde.lif = cfg.neurons.tde;
        tde.tau_fac_ms = cfg.tau_fac_ms;
        const auto d = spec.add_population(tde);
        spec.connect({f, 0}, {d, 0}, cfg.weights.sptc_tde, 1, snn::SynapseKind::facilitatory);
        spec.connect({g, 0}, {d, 0}, cfg.weights.sptc_tde, 1, snn::SynapseKind::trigger);
        snn::Network net(faulty(spec, opt.fault));
        return net.run(snn::ms_to_ticks(400.0), {d}).events.size();
    };
    std::ostringstream detail;
    bool ok = true;
    std::size_t prev = SIZE_MAX;
    for (double dt : {1.0, 2.0, 5.0, 10.0, 20.0, 50.0, 100.0}) {
        const auto b = burst(dt);
        detail << dt << "ms:" << b << ' ';
        if (b > prev) ok = false;
        prev = b;
    }
    if (burst(1.0) == 0) ok = false;
    for (double dt : {-1.0, -5.0, -20.0}) {
        const auto b = burst(dt);
        detail << dt << "ms:" << b << ' ';
        if (b != 0) ok = false;
    }
    return result("tde_monotonicity", ok, detail.str());
}

CheckResult check_wta_veto(const Options& opt)
{
    net::NetConfig cfg = faulty(opt.episode.network, opt.fault);
    cfg.seed = opt.seed;
    const auto a = net::assemble(cfg);
    snn::Network net(a.spec);
    const std::uint32_t c = 32, reach = 3;
    std::vector<std::uint64_t> wins(cfg.sizes.wta, 0);
    const Tick end = snn::ms_to_ticks(opt.veto_duration_s * 1000.0);
    for (Tick t = 0; t < end; ++t) {
        if (t % 10 == 0) net.inject({a.ids.int_lr, c}, 2.0, snn::SynapseKind::excitatory, 1);
        net.step();
        for (const auto& s : net.last_spikes())
            if (s.pop == a.ids.wta) ++wins[s.index];
    }
    std::uint64_t inside = 0, outside = 0;
    for (std::uint32_t i = 0; i < wins.size(); ++i) (i + reach >= c && i <= c + reach ? inside : outside) += wins[i];
    return result("wta_veto", inside == 0 && outside > 0,
                  fmt("%.0f WTA spikes in [29, 35], %.0f elsewhere over %.0f s", static_cast<double>(inside),
                      static_cast<double>(outside), opt.veto_duration_s));
}

CheckResult check_saccadic_suppression(const Options& opt)
{
    const auto r = motor_episode(opt);
    const auto wta = *r.network_spec.find("WTA"), sptc = *r.network_spec.find("SPTC");
    const auto iv = motor_intervals(r);
    std::uint64_t wta_inside = 0;
    double worst_ratio = 0.0;
    int compared = 0;
    Tick prev_end = 0;
    for (const auto& v : iv) {
        std::uint64_t during = 0, before = 0;
        for (const auto& s : r.spikes.events) {
            if (s.pop == wta && s.tick > v.begin && s.tick <= v.end) ++wta_inside;
            if (s.pop != sptc) continue;
            if (s.tick > v.begin && s.tick <= v.end) ++during;
            else if (s.tick > prev_end && s.tick < v.begin) ++before;
        }
        const double d_len = static_cast<double>(v.end - v.begin), b_len = static_cast<double>(v.begin - prev_end);
        if (before > 0 && d_len > 0 && b_len > 0) {
            worst_ratio = std::max(worst_ratio, (static_cast<double>(during) / d_len) / (static_cast<double>(before) / b_len));
            ++compared;
        }
        prev_end = v.end;
    }

    // Open loop: waves injected without a preceding winner, so the global
    // inhibitor is quiet and only the motor layer can hold the WTA down.
    net::NetConfig cfg = faulty(opt.episode.network, opt.fault);
    cfg.seed = opt.seed;
    const auto a = net::assemble(cfg);
    snn::Network net(a.spec);
    const Tick period = snn::ms_to_ticks(1000.0), gap = snn::ms_to_ticks(20.0);
    std::uint64_t probe_inside = 0;
    Tick wave_end = -1;  // last spike of the injected wave, extended while hops keep coming
    bool in_wave = false;
    for (Tick t = 0; t < 20 * period; ++t) {
        if (t % period == 0) {
            net.inject({a.ids.mot1, 50}, cfg.weights.wta_mot, snn::SynapseKind::excitatory, 1);
            in_wave = true;
            wave_end = t;
        }
        net.step();
        if (in_wave && t - wave_end > gap) in_wave = false;
        for (const auto& s : net.last_spikes()) {
            if (!in_wave) break;
            if (s.pop == a.ids.mot1) wave_end = s.tick;
            if (s.pop == a.ids.wta) ++probe_inside;
        }
    }

    const bool ok = !iv.empty() && wta_inside == 0 && probe_inside == 0 && worst_ratio <= 0.1;
    return result("saccadic_suppression", ok,
                  fmt("closed loop: %.0f saccades, %.0f WTA spikes during motor activity", static_cast<double>(iv.size()),
                      static_cast<double>(wta_inside)) +
                      fmt(", worst SPTC rate ratio %.3f over %.0f saccades", worst_ratio, compared) +
                      fmt("; injected waves: %.0f WTA spikes", static_cast<double>(probe_inside)));
}

CheckResult check_motor_exclusivity(const Options& opt)
{
    const auto r = motor_episode(opt);
    const auto m1 = *r.network_spec.find("MOT1"), m2 = *r.network_spec.find("MOT2");
    const Tick w = snn::ms_to_ticks(50.0);
    std::vector<std::uint8_t> seen;  // bit 0 MOT1, bit 1 MOT2 per 50 ms window
    std::size_t spikes = 0;
    for (const auto& s : r.spikes.events) {
        if (s.pop != m1 && s.pop != m2) continue;
        ++spikes;
        const auto k = static_cast<std::size_t>(s.tick / w);
        if (seen.size() <= k) seen.resize(k + 1, 0);
        seen[k] |= s.pop == m1 ? 1 : 2;
    }
    const auto both = std::count(seen.begin(), seen.end(), std::uint8_t{3});
    return result("motor_exclusivity", both == 0 && spikes > 0,
                  fmt("%.0f motor spikes, %.0f windows with both populations", static_cast<double>(spikes),
                      static_cast<double>(both)));
}

CheckResult check_wave_timing(const Options& opt)
{
    net::NetConfig cfg = faulty(opt.episode.network, opt.fault);
    cfg.seed = opt.seed;
    cfg.pois1_rate_hz = 0.0;  // no competing winners
    cfg.pois2_rate_hz = 0.0;
    const auto a = net::assemble(cfg);
    snn::Network net(a.spec);
    const std::uint32_t k0 = 50;
    net.inject({a.ids.mot1, k0}, cfg.weights.wta_mot, snn::SynapseKind::excitatory, 1);
    const auto rec = net.run(snn::ms_to_ticks(1500.0), {a.ids.mot1, a.ids.mot2});
    std::vector<Tick> first(cfg.sizes.mot, -1);
    std::size_t other = 0;
    for (const auto& s : rec.events) {
        if (s.pop != a.ids.mot1) {
            ++other;
            continue;
        }
        if (first[s.index] < 0) first[s.index] = s.tick;
    }
    const Tick hop = snn::ms_to_ticks(cfg.delays.mot_wave_ms);
    bool ok = other == 0;
    Tick worst = 0;
    for (std::uint32_t i = 0; i < k0; ++i)
        if (first[i] >= 0) ok = false;
    for (std::uint32_t i = k0 + 1; i < cfg.sizes.mot; ++i) {
        if (first[i] < 0 || first[i - 1] < 0) {
            ok = false;
            break;
        }
        const Tick err = std::abs(first[i] - first[i - 1] - hop);
        worst = std::max(worst, err);
    }
    if (worst > 1) ok = false;
    return result("wave_timing", ok,
                  fmt("worst hop error %.0f ticks, %.0f MOT2 spikes", static_cast<double>(worst), static_cast<double>(other)));
}

CheckResult check_event_cap(const Options& opt)
{
    const auto& cam = opt.episode.camera;
    std::mt19937_64 rng(opt.seed);
    std::uniform_real_distribution<float> u(0.0f, 1.0f);
    std::size_t worst = 0, saturated = 0;
    for (int trial = 0; trial < 50; ++trial) {
        vision::Frame a(cam.width, cam.height, 0.0f), b(a);
        const float density = static_cast<float>(trial) / 49.0f;
        for (std::size_t i = 0; i < a.pixels.size(); ++i) {
            a.pixels[i] = u(rng);
            b.pixels[i] = u(rng) < density ? 1.0f - a.pixels[i] : a.pixels[i];
        }
        const auto ev = vision::generate_events(a, b, 0, cam);
        worst = std::max(worst, ev.size());
        if (ev.size() == cam.max_events) ++saturated;
    }
    return result("event_cap", worst <= cam.max_events && saturated > 0,
                  fmt("largest cycle %.0f events (cap %.0f), %.0f saturated frames", static_cast<double>(worst),
                      static_cast<double>(cam.max_events), static_cast<double>(saturated)));
}

CheckResult check_census(const Options& opt)
{
    const auto a = net::assemble(faulty(opt.episode.network, opt.fault));
    std::size_t neurons = 0;
    for (const auto& p : a.spec.populations) neurons += p.size;
    const auto synapses = a.spec.connections.size();
    const bool ok = std::abs(static_cast<double>(neurons) / 4000.0 - 1.0) <= 0.2 &&
                    std::abs(static_cast<double>(synapses) / 300000.0 - 1.0) <= 0.2;
    return result("census", ok, fmt("%.0f neurons, %.0f synapses", static_cast<double>(neurons), static_cast<double>(synapses)));
}

CheckResult check_et_latency(const Options& opt)
{
    net::NetConfig cfg = faulty(opt.episode.network, opt.fault);
    double sum = 0.0;
    int fired = 0;
    for (int trial = 0; trial < opt.et_trials; ++trial) {
        cfg.seed = opt.seed + static_cast<std::uint64_t>(trial);
        const auto a = net::assemble(cfg);
        snn::Network net(a.spec);
        net.inject({a.ids.mot1, 50}, cfg.weights.wta_mot, snn::SynapseKind::excitatory, 1);
        Tick last_motor = 0, et = -1;
        for (Tick t = 0; t < snn::ms_to_ticks(5000.0) && et < 0; ++t) {
            // Hold every WTA candidate silent.
            if (t % 10 == 0)
                for (std::uint32_t i = 0; i < cfg.sizes.wta; ++i)
                    net.inject({a.ids.wta, i}, -5.0, snn::SynapseKind::inhibitory, 1);
            net.step();
            for (const auto& s : net.last_spikes()) {
                if (s.pop == a.ids.mot1 || s.pop == a.ids.mot2) last_motor = s.tick;
                if (s.pop == a.ids.et && et < 0) et = s.tick;
            }
        }
        if (et >= 0) {
            sum += snn::ticks_to_ms(et - last_motor);
            ++fired;
        }
    }
    const double mean = fired ? sum / fired : 0.0;
    return result("et_latency", fired == opt.et_trials && mean >= 600.0 && mean <= 800.0,
                  fmt("mean %.1f ms after the saccade, fired in %.0f of %.0f trials", mean, fired, opt.et_trials));
}

CheckResult check_determinism(const Options& opt)
{
    world::EnvSpec env;
    env.kind = world::EnvKind::clutter;
    env.density_pct = 15.0;
    world::EpisodeConfig cfg = faulty(opt.episode, opt.fault);
    cfg.budget_s = 3.0;
    cfg.network.seed = opt.seed;
    cfg.record_populations = {"WTA", "OFI", "MOT1", "MOT2", "ET"};
    const auto e = world::generate_environment(env, opt.seed);
    const auto r1 = world::run_episode(e, cfg), r2 = world::run_episode(e, cfg);
    std::ostringstream m1, m2;
    world::write_batch_csv(m1, {{"", env, opt.seed, opt.seed, r1.outcome, 0, r1.collision_time_s, r1.saccades, r1.metrics, ""}});
    world::write_batch_csv(m2, {{"", env, opt.seed, opt.seed, r2.outcome, 0, r2.collision_time_s, r2.saccades, r2.metrics, ""}});
    const bool rerun = r1.trajectory == r2.trajectory && r1.spikes == r2.spikes && m1.str() == m2.str();

    std::vector<world::BatchCell> cells;
    for (std::uint64_t s = 1; s <= 4; ++s) {
        world::BatchCell c;
        c.group = "density=15";
        c.env = env;
        c.env_seed = c.net_seed = opt.seed + s;
        c.episode = cfg;
        c.episode.budget_s = 1.5;
        c.episode.record_populations.clear();
        cells.push_back(c);
    }
    auto csv = [&](unsigned par) {
        std::ostringstream os;
        world::write_batch_csv(os, world::run_batch(cells, par));
        return os.str();
    };
    const bool batch = csv(1) == csv(4);
    return result("determinism", rerun && batch,
                  std::string("episode rerun ") + (rerun ? "identical" : "differs") + ", batch at 1 vs 4 threads " +
                      (batch ? "identical" : "differs"));
}

const std::vector<Check>& all_checks()
{
    static const std::vector<Check> checks = {
        {"kernel_oracle", check_kernel_oracle},
        {"tde_monotonicity", check_tde_monotonicity},
        {"wta_veto", check_wta_veto},
        {"saccadic_suppression", check_saccadic_suppression},
        {"motor_exclusivity", check_motor_exclusivity},
        {"wave_timing", check_wave_timing},
        {"event_cap", check_event_cap},
        {"census", check_census},
        {"et_latency", check_et_latency},
        {"determinism", check_determinism},
    };
    return checks;
}

std::vector<CheckResult> run_all(const Options& opt, const std::function<void(const CheckResult&)>& on_result)
{
    std::vector<CheckResult> out;
    for (const auto& c : all_checks()) {
        CheckResult r;
        try {
            r = c.run(opt);
        } catch (const std::exception& e) {
            r = {c.name, false, std::string("error: ") + e.what()};
        }
        if (on_result) on_result(r);
        out.push_back(std::move(r));
    }
    return out;
}

}  // namespace semdnav::validate
