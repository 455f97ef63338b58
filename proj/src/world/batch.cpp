#include "semdnav/world/batch.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <map>
#include <ostream>
#include <thread>

namespace semdnav::world {

namespace {

BatchRow run_cell(const BatchCell& cell)
{
    BatchRow row;
    row.group = cell.group;
    row.env = cell.env;
    row.env_seed = cell.env_seed;
    row.net_seed = cell.net_seed;
    try {
        const Environment env = generate_environment(cell.env, cell.env_seed);
        EpisodeConfig cfg = cell.episode;
        cfg.network.seed = cell.net_seed;
        const EpisodeResult r = run_episode(env, cfg);
        row.outcome = r.outcome;
        row.end_time_s = r.trajectory.back().t_s;
        row.collision_time_s = r.collision_time_s;
        row.saccades = r.saccades;
        row.metrics = r.metrics;
    } catch (const std::exception& e) {
        row.error = e.what();
    }
    return row;
}

// Mean of the finite values; NaN when there are none.
struct Mean {
    double sum = 0.0;
    std::size_t n = 0;
    void add(double x)
    {
        if (std::isfinite(x)) {
            sum += x;
            ++n;
        }
    }
    double get() const { return n ? sum / static_cast<double>(n) : std::numeric_limits<double>::quiet_NaN(); }
};

std::string csv_field(std::string s)
{
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) out += c == '"' ? std::string("\"\"") : std::string(1, c);
    return out + "\"";
}

}  // namespace

std::vector<BatchRow> run_batch(const std::vector<BatchCell>& cells, unsigned parallelism)
{
    std::vector<BatchRow> rows(cells.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i; (i = next.fetch_add(1)) < cells.size();) rows[i] = run_cell(cells[i]);
    };
    const unsigned n = std::max(1u, std::min<unsigned>(parallelism, static_cast<unsigned>(cells.size())));
    std::vector<std::thread> pool;
    for (unsigned t = 1; t < n; ++t) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();
    return rows;
}

std::vector<BatchSummary> summarize(const std::vector<BatchRow>& rows)
{
    std::vector<BatchSummary> out;
    std::map<std::string, std::size_t> index;
    struct Acc {
        Mean clearance, velocity, lateral;
        std::size_t ok = 0;
        std::uint64_t var = 0, all = 0;
    };
    std::vector<Acc> acc;
    for (const auto& r : rows) {
        auto [it, fresh] = index.try_emplace(r.group, out.size());
        if (fresh) {
            out.push_back({});
            out.back().group = r.group;
            acc.emplace_back();
        }
        BatchSummary& s = out[it->second];
        Acc& a = acc[it->second];
        ++s.runs;
        if (!r.outcome) {
            ++s.failed;
            continue;
        }
        if (succeeded(r)) ++a.ok;
        a.clearance.add(r.metrics.mean_clearance_au);
        a.velocity.add(r.metrics.mean_intersaccade_velocity_au_s);
        a.lateral.add(r.metrics.lateral_std_au);
        for (std::size_t g = 0; g < r.metrics.gap_crossings.size(); ++g) {
            a.all += r.metrics.gap_crossings[g];
            if (g == kVariableGap) a.var += r.metrics.gap_crossings[g];
        }
    }
    for (std::size_t k = 0; k < out.size(); ++k) {
        BatchSummary& s = out[k];
        const Acc& a = acc[k];
        const std::size_t done = s.runs - s.failed;
        s.success_rate = done ? static_cast<double>(a.ok) / static_cast<double>(done) : std::numeric_limits<double>::quiet_NaN();
        s.mean_clearance_au = a.clearance.get();
        s.mean_velocity_au_s = a.velocity.get();
        s.mean_lateral_std_au = a.lateral.get();
        s.gap_crossings = a.all;
        s.gap_entry_probability =
            a.all ? static_cast<double>(a.var) / static_cast<double>(a.all) : std::numeric_limits<double>::quiet_NaN();
    }
    return out;
}

void write_batch_csv(std::ostream& os, const std::vector<BatchRow>& rows)
{
    os << "group,kind,density_pct,width_au,gap_au,env_seed,net_seed,outcome,end_time_s,collision_time_s,saccades,"
          "measured_density_pct,mean_clearance_au,mean_velocity_au_s,lateral_mean_au,lateral_std_au,penetration_au,"
          "gap_crossings_fixed,gap_crossings_variable,error\n";
    for (const auto& r : rows) {
        const auto& m = r.metrics;
        const auto crossings = [&](std::size_t g) { return g < m.gap_crossings.size() ? m.gap_crossings[g] : 0u; };
        os << csv_field(r.group) << ',' << to_string(r.env.kind) << ',' << r.env.density_pct << ','
           << r.env.corridor_width_au << ',' << r.env.gap_au << ',' << r.env_seed << ',' << r.net_seed << ','
           << (r.outcome ? to_string(*r.outcome) : "failed") << ',' << r.end_time_s << ','
           << (r.collision_time_s ? std::to_string(*r.collision_time_s) : std::string()) << ',' << r.saccades << ','
           << m.density_pct << ',' << m.mean_clearance_au << ',' << m.mean_intersaccade_velocity_au_s << ','
           << m.lateral_mean_au << ',' << m.lateral_std_au << ',' << m.penetration_au << ',' << crossings(kFixedGap) << ','
           << crossings(kVariableGap) << ',' << csv_field(r.error) << '\n';
    }
}

void write_summary_csv(std::ostream& os, const std::vector<BatchSummary>& summary)
{
    os << "group,runs,failed,success_rate,mean_clearance_au,mean_velocity_au_s,mean_lateral_std_au,gap_crossings,"
          "gap_entry_probability\n";
    for (const auto& s : summary)
        os << csv_field(s.group) << ',' << s.runs << ',' << s.failed << ',' << s.success_rate << ','
           << s.mean_clearance_au << ',' << s.mean_velocity_au_s << ',' << s.mean_lateral_std_au << ','
           << s.gap_crossings << ',' << s.gap_entry_probability << '\n';
}

}  // namespace semdnav::world
