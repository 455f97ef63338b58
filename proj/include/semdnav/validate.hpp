#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "semdnav/world/episode.hpp"

namespace semdnav::validate {

/// Deliberate defects used to show that the checks can fail.
enum class Fault : std::uint8_t {
    none,
    tde_gain_grows,         // TDE gain rises with the facilitation age
    no_mot_wta_inhibition,  // MOT -> WTA weights set to zero
};

const char* to_string(Fault f);
Fault fault_from_string(const std::string& s);  // throws ConfigError

struct Options {
    world::EpisodeConfig episode;  // network and camera under test
    Fault fault = Fault::none;
    std::uint64_t seed = 1;
    int oracle_sequences = 50;
    double oracle_span_ms = 100.0;
    double veto_duration_s = 60.0;
    double episode_s = 10.0;  // closed-loop run behind the motor checks
    int et_trials = 10;
};

struct CheckResult {
    std::string name;
    bool passed = false;
    std::string detail;
};

/// Membrane traces of single neurons under random arrivals stay within
/// 0.1 mV of an adaptive Dormand-Prince integration of the same ODE.
CheckResult check_kernel_oracle(const Options& opt);
/// TDE burst size is non-increasing in the facilitation-to-trigger delay
/// and zero when the trigger comes first.
CheckResult check_tde_monotonicity(const Options& opt);
/// Sustained INT drive at column 32 vetoes WTA winners in [29, 35].
CheckResult check_wta_veto(const Options& opt);
/// Closed-loop corridor run: no WTA spike while a motor wave is running,
/// SPTC output drops by at least 90% against the preceding intersaccade,
/// and MOT1 and MOT2 never spike in the same 50 ms window.
CheckResult check_saccadic_suppression(const Options& opt);
CheckResult check_motor_exclusivity(const Options& opt);
/// A wave injected at MOT1[50] reaches every later neuron 10 ms per hop,
/// within one tick.
CheckResult check_wave_timing(const Options& opt);
/// Frame differences never yield more than the per-cycle event cap.
CheckResult check_event_cap(const Options& opt);
/// Neurons and synapses within 20% of 4k and 300k.
CheckResult check_census(const Options& opt);
/// With the WTA held silent the escape neuron fires 600-800 ms after the
/// end of a saccade, averaged over et_trials seeds.
CheckResult check_et_latency(const Options& opt);
/// Reruns are bit-identical and batch output does not depend on the
/// number of worker threads.
CheckResult check_determinism(const Options& opt);

struct Check {
    const char* name;
    std::function<CheckResult(const Options&)> run;
};

/// Every check above, in the order listed.
const std::vector<Check>& all_checks();

std::vector<CheckResult> run_all(const Options& opt, const std::function<void(const CheckResult&)>& on_result = {});

}  // namespace semdnav::validate
