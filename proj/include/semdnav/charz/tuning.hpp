#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "semdnav/charz/grating.hpp"
#include "semdnav/net/config.hpp"
#include "semdnav/vision/camera.hpp"

namespace semdnav::charz {

/// Spikes per neuron per second over a population, with the spread across
/// its neurons.
struct PopulationActivity {
    double mean_hz = 0.0;
    double std_hz = 0.0;
};

struct SemdActivity {
    PopulationActivity lr;  // prefers drift towards higher columns
    PopulationActivity rl;
    PopulationActivity sptc;
    std::size_t events = 0;
};

/// Network config reduced to the SPTC and both TDE layers.
net::NetConfig semd_only(net::NetConfig cfg);

/// Feeds camera events through SPTC and TDE layers for `duration_s`. The
/// last column has no neighbour and is excluded from the means.
SemdActivity semd_activity(const std::vector<vision::CameraEvent>& events, const net::NetConfig& cfg,
                           double duration_s);

struct TuningGrid {
    std::vector<double> frequencies_hz{0.1, 0.5, 1.0, 2.5, 5.0, 10.0};
    std::vector<double> printed_contrasts{0.0, 0.2, 0.4, 0.6, 0.8, 1.0};
    std::vector<Drift> drifts{Drift::preferred, Drift::null};
    int repetitions = 3;
    double wavelength_deg = 20.0;
    double duration_s = 4.0;
};

/// Event polarities fed to the motion detectors.
enum class Pathway : std::uint8_t { on, off, both };

const char* to_string(Pathway p);
std::vector<vision::CameraEvent> select_pathway(const std::vector<vision::CameraEvent>& events, Pathway p);

struct TuningOptions {
    TuningGrid grid;
    Pathway pathway = Pathway::on;
    StimulusOptics optics;
    vision::CameraModel camera;
    net::NetConfig network;
    std::uint64_t seed = 1;  // draws the grating phase of every repetition
    unsigned parallelism = 1;
};

/// One stimulus presentation. `lr` is the reference population: preferred
/// drift excites it, null drift is its null direction.
struct TuningRun {
    double frequency_hz;
    double printed_contrast;
    Drift drift;
    int repetition;
    double phase;
    std::size_t events;
    SemdActivity activity;
};

struct TuningPoint {
    double frequency_hz;
    double printed_contrast;
    Drift drift;
    double mean_hz;    // reference population, averaged over repetitions
    double std_hz;     // spread across its neurons, pooled over repetitions
    double mean_norm;  // divided by the maximum preferred mean
    double std_norm;
    int n_reps;
    bool degenerate;   // nonzero contrast yet no camera event
};

struct TuningResult {
    std::vector<TuningRun> runs;      // grid order, repetitions innermost
    std::vector<TuningPoint> points;  // grid order
    double norm_hz = 0.0;

    const TuningPoint* find(double frequency_hz, double printed_contrast, Drift drift) const;
};

/// Runs the grid; results do not depend on `parallelism`.
TuningResult run_tuning(const TuningOptions& opt);

/// Aggregates runs into normalised points (exposed for recorded inputs).
TuningResult aggregate(std::vector<TuningRun> runs, const TuningGrid& grid);

/// CSV "frequency_hz,contrast,direction,mean_norm,std_norm,n_reps"; contrast
/// is the Michelson contrast.
void write_tuning_csv(std::ostream& os, const TuningResult& r);
/// Per-presentation rows with both populations.
void write_runs_csv(std::ostream& os, const TuningResult& r);

}  // namespace semdnav::charz
