#pragma once

#include <cstdint>
#include <vector>

#include "semdnav/vision/camera.hpp"

namespace semdnav::charz {

enum class Drift : std::uint8_t { preferred, null };  // towards higher / lower column index

const char* to_string(Drift d);

struct GratingSpec {
    double wavelength_deg = 20.0;
    double frequency_hz = 5.0;
    double printed_contrast = 1.0;
    Drift drift = Drift::preferred;
    double duration_s = 4.0;
    double phase = 0.0;  // initial phase in periods, [0, 1)

    void validate() const;
};

/// Optics of the synthetic stimulus: every pixel integrates the grating
/// over its own angular width, optionally after a Gaussian blur.
struct StimulusOptics {
    double blur_px = 0.0;     // Gaussian sigma in pixels; 0 disables
    int samples_per_px = 16;  // 1 samples the pixel centre only
    double mean_level = 0.5;
};

/// Printed contrast to Michelson contrast, C / (2 - C).
double michelson_contrast(double printed_contrast);

/// Column brightness of the drifting grating at time t_s.
std::vector<float> grating_columns(const GratingSpec& g, const vision::CameraModel& cam, const StimulusOptics& optics,
                                   double t_s);

/// Events from frames rendered at the camera rate over the whole duration;
/// the first frame only primes the sensor.
std::vector<vision::CameraEvent> synth_grating_events(const GratingSpec& g, const vision::CameraModel& cam,
                                                      const StimulusOptics& optics = {});

}  // namespace semdnav::charz
