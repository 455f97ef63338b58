#include "semdnav/charz/tuning.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <ostream>
#include <random>
#include <thread>

#include "semdnav/net/assemble.hpp"
#include "semdnav/snn/network.hpp"

namespace semdnav::charz {

net::NetConfig semd_only(net::NetConfig cfg)
{
    auto& s = cfg.sizes;
    s.wta = s.gi = s.et = s.ofi = s.mot = s.pois1 = s.pois2 = 0;
    return cfg;
}

namespace {

PopulationActivity activity_of(const std::vector<std::uint64_t>& counts, std::uint32_t columns, double duration_s)
{
    double sum = 0.0, sum2 = 0.0;
    std::size_t n = 0;
    for (std::size_t i = 0; i < counts.size(); ++i) {
        if (i % columns == columns - 1) continue;
        const double r = static_cast<double>(counts[i]) / duration_s;
        sum += r;
        sum2 += r * r;
        ++n;
    }
    if (n == 0) return {};
    const double mean = sum / static_cast<double>(n);
    return {mean, std::sqrt(std::max(0.0, sum2 / static_cast<double>(n) - mean * mean))};
}

}  // namespace

SemdActivity semd_activity(const std::vector<vision::CameraEvent>& events, const net::NetConfig& cfg,
                           double duration_s)
{
    const auto reduced = semd_only(cfg);
    const auto a = net::assemble(reduced);
    snn::Network net(a.spec);
    const auto& s = reduced.sizes;
    const auto input = net::map_events_to_sptc(events, s);
    const snn::Tick lag = snn::ms_to_ticks(reduced.delays.camera_ms);
    const snn::Tick end = snn::ms_to_ticks(duration_s * 1000.0);

    std::vector<std::uint64_t> lr(a.spec.populations[a.ids.tde_lr].size), rl(lr.size()), sptc(lr.size());
    std::size_t next = 0, accepted = 0;
    while (net.now() < end) {
        // Events stamped at tick t arrive at t + lag; queue the ones due next tick.
        const snn::Tick due = net.now() + 1 - lag;
        for (; next < events.size(); ++next) {
            const auto& e = events[next];
            const snn::Tick t = static_cast<snn::Tick>(e.t_us / 100);
            if (t > due) break;
            if (e.x / 2u >= s.columns || e.y / 2u >= s.rows) continue;
            net.inject({a.ids.sptc, input.targets[accepted++]}, reduced.weights.dvs_sptc, snn::SynapseKind::excitatory,
                       std::max<snn::Tick>(1, t + lag - net.now()));
        }
        net.step();
        for (const auto& sp : net.last_spikes()) {
            if (sp.pop == a.ids.tde_lr) ++lr[sp.index];
            else if (sp.pop == a.ids.tde_rl) ++rl[sp.index];
            else if (sp.pop == a.ids.sptc) ++sptc[sp.index];
        }
    }
    return {activity_of(lr, s.columns, duration_s), activity_of(rl, s.columns, duration_s),
            activity_of(sptc, s.columns, duration_s), events.size()};
}

const char* to_string(Pathway p)
{
    switch (p) {
    case Pathway::on: return "on";
    case Pathway::off: return "off";
    case Pathway::both: return "both";
    }
    return "?";
}

std::vector<vision::CameraEvent> select_pathway(const std::vector<vision::CameraEvent>& events, Pathway p)
{
    if (p == Pathway::both) return events;
    const auto keep = p == Pathway::on ? vision::Polarity::on : vision::Polarity::off;
    std::vector<vision::CameraEvent> out;
    for (const auto& e : events)
        if (e.polarity == keep) out.push_back(e);
    return out;
}

const TuningPoint* TuningResult::find(double f, double c, Drift d) const
{
    for (const auto& p : points)
        if (p.frequency_hz == f && p.printed_contrast == c && p.drift == d) return &p;
    return nullptr;
}

TuningResult aggregate(std::vector<TuningRun> runs, const TuningGrid& grid)
{
    TuningResult r;
    r.runs = std::move(runs);
    for (double f : grid.frequencies_hz)
        for (double c : grid.printed_contrasts)
            for (Drift d : grid.drifts) {
                TuningPoint p{f, c, d, 0.0, 0.0, 0.0, 0.0, 0, false};
                double var = 0.0;
                for (const auto& run : r.runs) {
                    if (run.frequency_hz != f || run.printed_contrast != c || run.drift != d) continue;
                    p.mean_hz += run.activity.lr.mean_hz;
                    var += run.activity.lr.std_hz * run.activity.lr.std_hz;
                    if (c > 0 && f > 0 && run.events == 0) p.degenerate = true;
                    ++p.n_reps;
                }
                if (p.n_reps > 0) {
                    p.mean_hz /= p.n_reps;
                    p.std_hz = std::sqrt(var / p.n_reps);
                }
                r.points.push_back(p);
            }
    for (const auto& p : r.points)
        if (p.drift == Drift::preferred) r.norm_hz = std::max(r.norm_hz, p.mean_hz);
    for (auto& p : r.points) {
        p.mean_norm = r.norm_hz > 0 ? p.mean_hz / r.norm_hz : 0.0;
        p.std_norm = r.norm_hz > 0 ? p.std_hz / r.norm_hz : 0.0;
    }
    return r;
}

TuningResult run_tuning(const TuningOptions& opt)
{
    const auto& g = opt.grid;
    std::vector<TuningRun> runs;
    std::mt19937_64 rng(opt.seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (double f : g.frequencies_hz)
        for (double c : g.printed_contrasts)
            for (Drift d : g.drifts)
                for (int k = 0; k < g.repetitions; ++k) runs.push_back({f, c, d, k, unit(rng), 0, {}});

    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i; (i = next.fetch_add(1)) < runs.size();) {
            auto& run = runs[i];
            GratingSpec spec;
            spec.wavelength_deg = g.wavelength_deg;
            spec.frequency_hz = run.frequency_hz;
            spec.printed_contrast = run.printed_contrast;
            spec.drift = run.drift;
            spec.duration_s = g.duration_s;
            spec.phase = run.phase;
            const auto events = select_pathway(synth_grating_events(spec, opt.camera, opt.optics), opt.pathway);
            run.events = events.size();
            run.activity = semd_activity(events, opt.network, g.duration_s);
        }
    };
    const unsigned n = std::max(1u, std::min<unsigned>(opt.parallelism, static_cast<unsigned>(runs.size())));
    std::vector<std::thread> pool;
    for (unsigned t = 1; t < n; ++t) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();
    return aggregate(std::move(runs), g);
}

void write_tuning_csv(std::ostream& os, const TuningResult& r)
{
    os << "frequency_hz,contrast,direction,mean_norm,std_norm,n_reps\n";
    for (const auto& p : r.points)
        os << p.frequency_hz << ',' << michelson_contrast(p.printed_contrast) << ',' << to_string(p.drift) << ','
           << p.mean_norm << ',' << p.std_norm << ',' << p.n_reps << '\n';
}

void write_runs_csv(std::ostream& os, const TuningResult& r)
{
    os << "frequency_hz,printed_contrast,contrast,direction,repetition,phase,events,lr_mean_hz,lr_std_hz,rl_mean_hz,"
          "rl_std_hz\n";
    for (const auto& x : r.runs)
        os << x.frequency_hz << ',' << x.printed_contrast << ',' << michelson_contrast(x.printed_contrast) << ','
           << to_string(x.drift) << ',' << x.repetition << ',' << x.phase << ',' << x.events << ','
           << x.activity.lr.mean_hz << ',' << x.activity.lr.std_hz << ',' << x.activity.rl.mean_hz << ','
           << x.activity.rl.std_hz << '\n';
}

}  // namespace semdnav::charz
