// Command-line front end: characterize | episode | batch | validate | dump-wiring.
//
// Exit codes: 0 success, 1 runtime or I/O error, 2 config error,
// 3 validation failure, 4 episode ended in a collision.

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "semdnav/charz/tuning.hpp"
#include "semdnav/errors.hpp"
#include "semdnav/net/assemble.hpp"
#include "semdnav/run_config.hpp"
#include "semdnav/validate.hpp"
#include "semdnav/vision/event_io.hpp"
#include "semdnav/world/batch.hpp"

namespace fs = std::filesystem;
using namespace semdnav;

namespace {

constexpr int kExitError = 1, kExitConfig = 2, kExitValidation = 3, kExitCollision = 4;

struct Common {
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> out;
    std::optional<unsigned> parallelism;
};

RunConfig resolve(const Common& c)
{
    RunConfig cfg = c.config_path.empty() ? RunConfig{} : load_run_config(c.config_path);
    if (c.seed) cfg.env_seed = cfg.net_seed = *c.seed;
    if (c.out) cfg.output_dir = *c.out;
    if (c.parallelism) cfg.parallelism = *c.parallelism;
    cfg.finalize();
    return cfg;
}

class Output {
public:
    Output(const RunConfig& cfg, std::string command) : cfg_(cfg), command_(std::move(command)), dir_(cfg.output_dir)
    {
        std::error_code ec;
        fs::create_directories(dir_, ec);
        if (ec || !fs::is_directory(dir_)) throw std::runtime_error(dir_.string() + ": cannot create output directory");
        std::ofstream os = open("config.json");
        nlohmann::json j = to_json(cfg);
        j["provenance"] = {{"tool", "semdnav"}, {"version", SEMDNAV_VERSION}, {"command", command_},
                           {"config_hash", config_hash(cfg)}, {"env_seed", cfg.env_seed}, {"net_seed", cfg.net_seed}};
        os << j.dump(2) << '\n';
    }

    /// Opens a CSV with the provenance header already written.
    std::ofstream csv(const std::string& name) const
    {
        std::ofstream os = open(name);
        os << "# semdnav " << SEMDNAV_VERSION << " command=" << command_ << " config_hash=" << config_hash(cfg_)
           << " env_seed=" << cfg_.env_seed << " net_seed=" << cfg_.net_seed << '\n';
        os.precision(10);
        return os;
    }

    fs::path path(const std::string& name) const { return dir_ / name; }

private:
    std::ofstream open(const std::string& name) const
    {
        std::ofstream os(dir_ / name);
        if (!os) throw std::runtime_error((dir_ / name).string() + ": cannot write");
        return os;
    }

    const RunConfig& cfg_;
    std::string command_;
    fs::path dir_;
};

void add_common(CLI::App* app, Common& c)
{
    app->add_option("--config", c.config_path, "JSON run configuration")->check(CLI::ExistingFile);
    app->add_option("--seed", c.seed, "Seed for both the environment and the network");
    app->add_option("--out", c.out, "Output directory");
    app->add_option("--parallelism", c.parallelism, "Worker threads")->check(CLI::PositiveNumber);
}

int cmd_characterize(const Common& common, const std::vector<double>& freqs, const std::vector<double>& contrasts,
                     std::optional<int> reps, const std::vector<std::string>& ingest)
{
    RunConfig cfg = resolve(common);
    auto& grid = cfg.characterize.grid;
    if (!freqs.empty()) grid.frequencies_hz = freqs;
    if (!contrasts.empty()) grid.printed_contrasts = contrasts;
    if (reps) grid.repetitions = *reps;
    cfg.finalize();
    Output out(cfg, "characterize");

    if (!ingest.empty()) {
        auto os = out.csv("ingest.csv");
        os << "file,events,lr_mean_hz,lr_std_hz,rl_mean_hz,rl_std_hz\n";
        for (const auto& f : ingest) {
            const auto events = charz::select_pathway(vision::load_events(f), cfg.characterize.pathway);
            const auto a = charz::semd_activity(events, cfg.characterize.network, grid.duration_s);
            os << f << ',' << events.size() << ',' << a.lr.mean_hz << ',' << a.lr.std_hz << ',' << a.rl.mean_hz << ','
               << a.rl.std_hz << '\n';
        }
        return 0;
    }

    const auto r = charz::run_tuning(cfg.characterize);
    auto curves = out.csv("tuning.csv");
    charz::write_tuning_csv(curves, r);
    auto runs = out.csv("tuning_runs.csv");
    charz::write_runs_csv(runs, r);
    std::size_t degenerate = 0;
    for (const auto& p : r.points) degenerate += p.degenerate;
    std::cout << r.runs.size() << " presentations, " << r.points.size() << " curve points, " << degenerate
              << " degenerate, normalisation " << r.norm_hz << " Hz\n";
    return 0;
}

int cmd_episode(const Common& common)
{
    RunConfig cfg = resolve(common);
    if (cfg.episode.record_populations.empty()) cfg.episode.record_populations = {"WTA", "ET", "OFI", "MOT1", "MOT2"};
    Output out(cfg, "episode");
    const auto env = world::generate_environment(cfg.environment, cfg.env_seed);
    const auto r = world::run_episode(env, cfg.episode);

    auto tr = out.csv("trajectory.csv");
    world::write_trajectory_csv(tr, r.trajectory);
    auto raster = out.csv("raster.csv");
    r.spikes.write_csv(raster, r.network_spec);
    auto envf = out.csv("environment.csv");
    world::write_environment_csv(envf, env);
    auto sac = out.csv("saccades.csv");
    sac << "t_s,source,wta_index,turn_deg\n";
    for (const auto& s : r.saccade_log)
        sac << s.t_s << ',' << (s.decision.escape ? "ET" : "WTA") << ',' << s.decision.wta_index << ',' << s.turn_deg
            << '\n';
    if (env.is_corridor()) {
        auto lat = out.csv("lateral.csv");
        world::write_lateral_csv(lat, r.trajectory, env);
    }
    auto m = out.csv("metrics.csv");
    world::BatchRow row{"episode", cfg.environment, cfg.env_seed, cfg.net_seed, r.outcome, r.trajectory.back().t_s,
                        r.collision_time_s, r.saccades, r.metrics, ""};
    world::write_batch_csv(m, {row});

    std::cout << "outcome " << world::to_string(r.outcome) << " at " << r.trajectory.back().t_s << " s, "
              << r.saccades << " saccades\n";
    return r.outcome == world::Outcome::collided ? kExitCollision : 0;
}

struct BatchGrid {
    std::vector<double> densities, widths, gaps;
    std::vector<std::uint32_t> n_connect;
    int seeds = 10;
    bool fixed_velocity = false;
};

int cmd_batch(const Common& common, const BatchGrid& g)
{
    RunConfig cfg = resolve(common);
    Output out(cfg, "batch");
    std::vector<world::BatchCell> cells;
    auto add = [&](const std::string& group, world::EnvSpec env, const world::EpisodeConfig& ep) {
        for (int s = 0; s < g.seeds; ++s) {
            const auto seed = cfg.env_seed + static_cast<std::uint64_t>(s);
            cells.push_back({group, env, seed, seed, ep});
        }
    };
    world::EpisodeConfig ep = cfg.episode;
    if (g.fixed_velocity) ep.adaptive_velocity = false;
    const int axes = !g.densities.empty() + !g.widths.empty() + !g.gaps.empty() + !g.n_connect.empty();
    if (axes != 1) throw ConfigError("batch: give exactly one of --densities, --widths, --gaps, --n-connect");
    world::EnvSpec env = cfg.environment;
    auto label = [](const char* k, double v) {
        std::ostringstream os;
        os << k << '=' << v;
        return os.str();
    };
    for (double d : g.densities) {
        env.kind = world::EnvKind::clutter;
        env.density_pct = d;
        add(label("density_pct", d), env, ep);
    }
    for (double w : g.widths) {
        env.kind = world::EnvKind::corridor;
        env.corridor_width_au = w;
        add(label("width_au", w), env, ep);
    }
    for (double w : g.gaps) {
        env.kind = world::EnvKind::gap_arena;
        env.gap_au = w;
        add(label("gap_au", w), env, ep);
    }
    for (auto n : g.n_connect) {
        env.kind = world::EnvKind::narrowing_corridor;
        world::EpisodeConfig e = ep;
        e.network.n_connect = n;
        add(label("n_connect", n), env, e);
    }
    for (const auto& c : cells) c.episode.validate();
    const auto rows = world::run_batch(cells, cfg.parallelism);
    auto b = out.csv("batch.csv");
    world::write_batch_csv(b, rows);
    const auto summary = world::summarize(rows);
    auto s = out.csv("summary.csv");
    world::write_summary_csv(s, summary);
    for (const auto& x : summary)
        std::cout << x.group << ": " << x.runs << " runs, success " << x.success_rate << ", velocity "
                  << x.mean_velocity_au_s << " a.u./s\n";
    return 0;
}

int cmd_validate(const Common& common, const std::string& fault)
{
    RunConfig cfg = resolve(common);
    Output out(cfg, "validate");
    validate::Options opt;
    opt.episode = cfg.episode;
    opt.seed = cfg.net_seed;
    opt.fault = validate::fault_from_string(fault);
    auto os = out.csv("validate.csv");
    os << "check,passed,detail\n";
    bool all = true;
    validate::run_all(opt, [&](const validate::CheckResult& r) {
        std::cout << (r.passed ? "PASS " : "FAIL ") << r.name << ": " << r.detail << std::endl;
        os << r.name << ',' << (r.passed ? 1 : 0) << ",\"" << r.detail << "\"\n";
        all = all && r.passed;
    });
    return all ? 0 : kExitValidation;
}

int cmd_dump_wiring(const Common& common)
{
    RunConfig cfg = resolve(common);
    Output out(cfg, "dump-wiring");
    const auto a = net::assemble(cfg.episode.network);
    auto os = out.csv("wiring.csv");
    net::write_wiring_csv(os, a.spec);
    auto rows = out.csv("wiring_rows.csv");
    rows << "row,connections\n";
    for (const auto& r : a.rows) rows << '"' << r.row << "\"," << r.connections << '\n';
    std::cout << a.spec.connections.size() << " connections in " << a.rows.size() << " rows\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Spiking optic-flow collision avoidance: characterization and closed-loop experiments"};
    app.require_subcommand(1);
    Common common;

    auto* ch = app.add_subcommand("characterize", "Velocity and contrast tuning of the motion detectors");
    std::vector<double> freqs, contrasts;
    std::optional<int> reps;
    std::vector<std::string> ingest;
    add_common(ch, common);
    ch->add_option("--frequencies", freqs, "Temporal frequencies in Hz")->delimiter(',');
    ch->add_option("--contrasts", contrasts, "Printed contrasts in [0, 1]")->delimiter(',');
    ch->add_option("--repetitions", reps, "Presentations per grid point");
    ch->add_option("--events", ingest, "Recorded event CSVs to run through the detectors instead of the grid");

    auto* ep = app.add_subcommand("episode", "One closed-loop run");
    add_common(ep, common);

    auto* ba = app.add_subcommand("batch", "Sweep densities, corridor widths, gap widths or n_connect");
    BatchGrid grid;
    add_common(ba, common);
    ba->add_option("--densities", grid.densities, "Clutter densities in percent")->delimiter(',');
    ba->add_option("--widths", grid.widths, "Corridor widths in a.u.")->delimiter(',');
    ba->add_option("--gaps", grid.gaps, "Variable gap widths in a.u.")->delimiter(',');
    ba->add_option("--n-connect", grid.n_connect, "Narrowing corridor runs per n_connect")->delimiter(',');
    ba->add_option("--seeds", grid.seeds, "Seeds per cell, counting up from --seed")->check(CLI::PositiveNumber);
    ba->add_flag("--fixed-velocity", grid.fixed_velocity, "Disable the optic-flow speed control");

    auto* va = app.add_subcommand("validate", "Structural invariant suite");
    std::string fault = "none";
    add_common(va, common);
    va->add_option("--fault", fault, "Inject a defect: none, tde_gain_grows, no_mot_wta_inhibition");

    auto* dw = app.add_subcommand("dump-wiring", "Every realised connection as CSV");
    add_common(dw, common);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitConfig;
    }

    try {
        if (ch->parsed()) return cmd_characterize(common, freqs, contrasts, reps, ingest);
        if (ep->parsed()) return cmd_episode(common);
        if (ba->parsed()) return cmd_batch(common, grid);
        if (va->parsed()) return cmd_validate(common, fault);
        if (dw->parsed()) return cmd_dump_wiring(common);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitError;
    }
    return kExitError;
}
