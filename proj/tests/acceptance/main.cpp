// Acceptance run: one PASS/FAIL line per criterion. Arguments select a
// subset by number; none runs all twelve.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "semdnav/charz/tuning.hpp"
#include "semdnav/net/motor.hpp"
#include "semdnav/validate.hpp"
#include "semdnav/world/batch.hpp"

using namespace semdnav;

namespace {

unsigned threads()
{
    return std::max(1u, std::thread::hardware_concurrency());
}

struct Outcome {
    int id;
    bool passed;
};

std::vector<Outcome> outcomes;

void report(int id, const char* name, bool passed, const std::string& detail, double seconds)
{
    std::printf("[%s] %2d %s: %s (%.0f s)\n", passed ? "PASS" : "FAIL", id, name, detail.c_str(), seconds);
    std::fflush(stdout);
    outcomes.push_back({id, passed});
}

class Stopwatch {
public:
    double seconds() const
    {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    }

private:
    std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

std::string fmt(double v, int digits = 4)
{
    std::ostringstream os;
    os.precision(digits);
    os << v;
    return os.str();
}

// --- characterization: criteria 1-3 share one tuning run -------------------

struct Tuning {
    charz::TuningResult result;
    double seconds = 0.0;
};

const Tuning& tuning()
{
    static const Tuning t = [] {
        Stopwatch sw;
        charz::TuningOptions opt;
        opt.parallelism = threads();
        Tuning out;
        out.result = charz::run_tuning(opt);
        out.seconds = sw.seconds();
        return out;
    }();
    return t;
}

void velocity_peak()
{
    const auto& t = tuning();
    const auto& grid = charz::TuningGrid{}.frequencies_hz;
    std::string curve;
    double best_f = 0.0, best = -1.0;
    for (double f : grid) {
        const double v = t.result.find(f, 1.0, charz::Drift::preferred)->mean_norm;
        curve += fmt(f) + "Hz=" + fmt(v) + " ";
        if (v > best) best = v, best_f = f;
    }
    const double r5 = t.result.find(5.0, 1.0, charz::Drift::preferred)->mean_norm;
    const double r10 = t.result.find(10.0, 1.0, charz::Drift::preferred)->mean_norm;
    report(1, "velocity tuning peak at 5 Hz", best_f == 5.0 && r10 < r5, curve + "peak " + fmt(best_f) + " Hz",
           t.seconds);
}

void direction_selectivity()
{
    const auto& t = tuning();
    double worst = 0.0;
    for (const auto& p : t.result.points)
        if (p.drift == charz::Drift::null) worst = std::max(worst, p.mean_norm);
    report(2, "null-direction maximum <= 0.25", worst <= 0.25, "max null " + fmt(worst), 0.0);
}

void contrast_half_response()
{
    const auto& t = tuning();
    std::vector<std::pair<double, double>> curve;  // Michelson contrast, response
    for (double c : charz::TuningGrid{}.printed_contrasts)
        curve.push_back({charz::michelson_contrast(c), t.result.find(5.0, c, charz::Drift::preferred)->mean_hz});
    double peak = 0.0;
    for (auto [c, r] : curve) peak = std::max(peak, r);
    double half = NAN;
    for (std::size_t i = 1; i < curve.size(); ++i) {
        const auto [c0, r0] = curve[i - 1];
        const auto [c1, r1] = curve[i];
        if (r0 < 0.5 * peak && r1 >= 0.5 * peak) {
            half = c0 + (0.5 * peak - r0) * (c1 - c0) / (r1 - r0);
            break;
        }
    }
    report(3, "contrast half-response in [0.25, 0.45]", half >= 0.25 && half <= 0.45,
           "half response at Michelson " + fmt(half), 0.0);
}

// --- kernel and detector ---------------------------------------------------

void kernel_fidelity()
{
    Stopwatch sw;
    validate::Options opt;
    opt.oracle_sequences = 50;
    opt.oracle_span_ms = 100.0;
    const auto r = validate::check_kernel_oracle(opt);
    report(4, "LIF kernel within 0.1 mV of the ODE oracle", r.passed, r.detail, sw.seconds());
}

void tde_monotonicity()
{
    Stopwatch sw;
    const auto r = validate::check_tde_monotonicity(validate::Options{});
    report(5, "TDE burst non-increasing in delay", r.passed, r.detail, sw.seconds());
}

// --- corridors: criteria 6 and 7 share the runs ----------------------------

const std::vector<double> kWidths{11.25, 12.5, 15.0};

struct Corridors {
    std::map<double, world::BatchSummary> by_width;
    std::map<double, double> mean_lateral;
    double seconds = 0.0;
};

const Corridors& corridors()
{
    static const Corridors c = [] {
        Stopwatch sw;
        std::vector<world::BatchCell> cells;
        for (double w : kWidths)
            for (std::uint64_t s = 1; s <= 3; ++s) {
                world::BatchCell cell;
                cell.group = fmt(w, 5);
                cell.env.kind = world::EnvKind::corridor;
                cell.env.corridor_width_au = w;
                cell.env.corridor_length_au = 40.0;
                cell.env_seed = s;
                cell.net_seed = s;
                cells.push_back(cell);
            }
        const auto rows = world::run_batch(cells, threads());
        Corridors out;
        for (const auto& s : world::summarize(rows)) out.by_width[std::stod(s.group)] = s;
        std::map<double, int> n;
        for (const auto& r : rows) {
            if (!r.outcome || std::isnan(r.metrics.lateral_mean_au)) continue;
            out.mean_lateral[r.env.corridor_width_au] += r.metrics.lateral_mean_au;
            ++n[r.env.corridor_width_au];
        }
        for (auto& [w, m] : out.mean_lateral) m /= n[w];
        out.seconds = sw.seconds();
        return out;
    }();
    return c;
}

void corridor_centering()
{
    const auto& c = corridors();
    bool increasing = true, centred = true;
    std::string detail;
    for (std::size_t i = 0; i < kWidths.size(); ++i) {
        const double w = kWidths[i];
        const double sd = c.by_width.at(w).mean_lateral_std_au;
        const double mean = c.mean_lateral.count(w) ? c.mean_lateral.at(w) : NAN;
        detail += "w=" + fmt(w) + ": std " + fmt(sd) + " mean " + fmt(mean) + "; ";
        if (i > 0 && !(sd > c.by_width.at(kWidths[i - 1]).mean_lateral_std_au)) increasing = false;
        if (!(std::abs(mean) <= 0.1 * w)) centred = false;
    }
    detail += increasing ? "std increasing" : "std not increasing";
    detail += centred ? ", centred" : ", off centre";
    report(6, "corridor centering", increasing && centred, detail, c.seconds);
}

void speed_width()
{
    const auto& c = corridors();
    const std::map<double, double> reference{{11.25, 0.72}, {12.5, 0.75}, {15.0, 0.79}};
    bool increasing = true;
    std::string detail;
    for (std::size_t i = 0; i < kWidths.size(); ++i) {
        const double w = kWidths[i];
        const double v = c.by_width.at(w).mean_velocity_au_s;
        const bool in_band = std::abs(v - reference.at(w)) <= 0.15;
        detail += "w=" + fmt(w) + ": " + fmt(v) + " a.u./s (" + (in_band ? "within" : "outside") + " +-0.15 of " +
                  fmt(reference.at(w)) + "); ";
        if (i > 0 && !(v > c.by_width.at(kWidths[i - 1]).mean_velocity_au_s)) increasing = false;
    }
    detail += increasing ? "strictly increasing" : "not strictly increasing";
    report(7, "intersaccade speed increases with width", increasing, detail, 0.0);
}

// --- gap preference ---------------------------------------------------------

void gap_preference()
{
    Stopwatch sw;
    // 20 crossings is the floor; 60 keeps the binomial error near 0.06.
    constexpr std::uint64_t kMinCrossings = 60;
    constexpr std::uint64_t kMaxSeeds = 100;
    constexpr double kPlateau = 0.1;
    const std::vector<double> widths{5.0, 8.0, 10.0, 13.0};
    std::vector<double> p;
    std::string detail;
    bool enough = true;
    for (double w : widths) {
        std::uint64_t variable = 0, total = 0, seed = 0;
        while (total < kMinCrossings && seed < kMaxSeeds) {
            std::vector<world::BatchCell> cells;
            for (unsigned k = 0; k < threads(); ++k) {
                world::BatchCell cell;
                cell.env.kind = world::EnvKind::gap_arena;
                cell.env.gap_au = w;
                cell.env.fixed_gap_au = 10.0;
                cell.env_seed = cell.net_seed = ++seed;
                cell.episode.budget_s = 300.0;
                cells.push_back(cell);
            }
            for (const auto& r : world::run_batch(cells, threads())) {
                if (!r.outcome) continue;
                variable += r.metrics.gap_crossings[world::kVariableGap];
                total += r.metrics.gap_crossings[world::kFixedGap] + r.metrics.gap_crossings[world::kVariableGap];
            }
        }
        enough = enough && total >= kMinCrossings;
        p.push_back(total ? static_cast<double>(variable) / total : NAN);
        detail += "w=" + fmt(w) + ": " + fmt(p.back()) + " (" + std::to_string(total) + " crossings, " +
                  std::to_string(seed) + " runs); ";
    }
    bool nondecreasing = true;
    for (std::size_t i = 1; i < p.size(); ++i)
        if (!(p[i] >= p[i - 1])) nondecreasing = false;
    const bool plateau = std::abs(p[3] - p[2]) <= kPlateau;
    detail += std::string(nondecreasing ? "non-decreasing" : "decreasing somewhere") + ", plateau " +
              (plateau ? "holds" : "missing") + (enough ? "" : ", too few crossings");
    report(8, "variable gap entry grows then plateaus", enough && nondecreasing && plateau, detail, sw.seconds());
}

// --- clutter: criteria 9 and 10 share the runs -----------------------------

const std::vector<double> kDensities{5.0, 15.0, 25.0};

struct Clutter {
    std::map<double, world::BatchSummary> adaptive, fixed;
    std::size_t adaptive_ok = 0, fixed_ok = 0, runs = 0;
    double seconds = 0.0;
};

const Clutter& clutter()
{
    static const Clutter c = [] {
        Stopwatch sw;
        std::vector<world::BatchCell> cells;
        for (bool adaptive : {true, false})
            for (double d : kDensities)
                for (std::uint64_t s = 1; s <= 10; ++s) {
                    world::BatchCell cell;
                    cell.group = std::string(adaptive ? "a" : "f") + fmt(d);
                    cell.env.kind = world::EnvKind::clutter;
                    cell.env.density_pct = d;
                    cell.env_seed = cell.net_seed = s;
                    cell.episode.budget_s = 600.0;
                    cell.episode.adaptive_velocity = adaptive;
                    cells.push_back(cell);
                }
        const auto rows = world::run_batch(cells, threads());
        Clutter out;
        for (const auto& r : rows) {
            const bool adaptive = r.group[0] == 'a';
            (adaptive ? out.adaptive_ok : out.fixed_ok) += world::succeeded(r);
            out.runs += adaptive;
        }
        for (const auto& s : world::summarize(rows))
            (s.group[0] == 'a' ? out.adaptive : out.fixed)[std::stod(s.group.substr(1))] = s;
        out.seconds = sw.seconds();
        return out;
    }();
    return c;
}

void clutter_success()
{
    const auto& c = clutter();
    const double rate = static_cast<double>(c.adaptive_ok) / c.runs;
    std::string detail = "adaptive " + std::to_string(c.adaptive_ok) + "/" + std::to_string(c.runs) + " (";
    for (double d : kDensities) detail += fmt(d) + "%: " + fmt(c.adaptive.at(d).success_rate) + " ";
    detail += "), fixed " + std::to_string(c.fixed_ok) + "/" + std::to_string(c.runs);
    report(9, "clutter success >= 60% and adaptive >= fixed", rate >= 0.6 && c.adaptive_ok >= c.fixed_ok, detail,
           c.seconds);
}

void velocity_density()
{
    const auto& c = clutter();
    bool ok = true;
    std::string detail;
    for (std::size_t i = 0; i < kDensities.size(); ++i) {
        const double v = c.adaptive.at(kDensities[i]).mean_velocity_au_s;
        detail += fmt(kDensities[i]) + "%: " + fmt(v) + " a.u./s; ";
        if (i > 0 && !(v <= c.adaptive.at(kDensities[i - 1]).mean_velocity_au_s)) ok = false;
    }
    report(10, "intersaccade velocity non-increasing in density", ok, detail, 0.0);
}

// --- connectivity ------------------------------------------------------------

void connectivity()
{
    Stopwatch sw;
    const std::vector<std::uint32_t> ns{0, 2, 4, 8};
    std::vector<world::BatchCell> cells;
    for (auto n : ns)
        for (std::uint64_t s = 1; s <= 3; ++s) {
            world::BatchCell cell;
            cell.group = std::to_string(n);
            cell.env.kind = world::EnvKind::narrowing_corridor;
            cell.env_seed = cell.net_seed = s;
            cell.episode.network.n_connect = n;
            cell.episode.budget_s = 120.0;
            cells.push_back(cell);
        }
    std::map<std::uint32_t, double> depth;
    std::map<std::uint32_t, int> count;
    for (const auto& r : world::run_batch(cells, threads())) {
        if (!r.outcome) continue;
        const auto n = static_cast<std::uint32_t>(std::stoul(r.group));
        depth[n] += r.metrics.penetration_au;
        ++count[n];
    }
    bool monotone = true;
    std::string detail;
    for (std::size_t i = 0; i < ns.size(); ++i) {
        depth[ns[i]] /= std::max(1, count[ns[i]]);
        detail += "n=" + std::to_string(ns[i]) + ": " + fmt(depth[ns[i]]) + " a.u.; ";
        if (i > 0 && !(depth[ns[i]] <= depth[ns[i - 1]])) monotone = false;
    }
    // Aperture law: each extra neighbour widens the blind gap by two columns.
    bool law = true;
    for (std::uint32_t n = 0; n <= 16; ++n)
        law = law && net::gap_min_deg(n) == (2.0 * n + 1.0) * 140.0 / 64.0;
    detail += std::string(monotone ? "non-increasing" : "not monotone") + ", gap_min " + (law ? "exact" : "wrong");
    report(11, "penetration non-increasing in n_connect", monotone && law, detail, sw.seconds());
}

// --- release gate ------------------------------------------------------------

void release_gate()
{
    Stopwatch sw;
    std::string failed;
    const auto results = validate::run_all(validate::Options{}, [](const validate::CheckResult& r) {
        std::printf("       %-22s %s %s\n", r.name.c_str(), r.passed ? "ok  " : "FAIL", r.detail.c_str());
        std::fflush(stdout);
    });
    for (const auto& r : results)
        if (!r.passed) failed += r.name + " ";
    report(12, "structural invariants (validate)", failed.empty(), failed.empty() ? "all checks pass" : "failed: " + failed,
           sw.seconds());
}

}  // namespace

int main(int argc, char** argv)
{
    std::set<int> only;
    for (int i = 1; i < argc; ++i) only.insert(std::atoi(argv[i]));
    const std::vector<void (*)()> criteria{velocity_peak,  direction_selectivity, contrast_half_response,
                                           kernel_fidelity, tde_monotonicity,     corridor_centering,
                                           speed_width,     gap_preference,       clutter_success,
                                           velocity_density, connectivity,         release_gate};
    for (std::size_t i = 0; i < criteria.size(); ++i)
        if (only.empty() || only.count(static_cast<int>(i + 1))) criteria[i]();

    int failed = 0;
    for (const auto& o : outcomes) failed += !o.passed;
    std::printf("%zu criteria run, %d failed\n", outcomes.size(), failed);
    return failed == 0 ? 0 : 1;
}
