#include "semdnav/charz/grating.hpp"

#include <cmath>

#include "semdnav/errors.hpp"

namespace semdnav::charz {

const char* to_string(Drift d) { return d == Drift::preferred ? "preferred" : "null"; }

void GratingSpec::validate() const
{
    if (!(wavelength_deg > 0)) throw ConfigError("grating: wavelength_deg must be > 0");
    if (!(frequency_hz >= 0)) throw ConfigError("grating: frequency_hz must be >= 0");
    if (!(duration_s > 0)) throw ConfigError("grating: duration_s must be > 0");
    if (!(printed_contrast >= 0 && printed_contrast <= 1)) throw ConfigError("grating: printed_contrast must lie in [0, 1]");
}

double michelson_contrast(double printed_contrast) { return printed_contrast / (2.0 - printed_contrast); }

namespace {

// Unit square wave: +1 on the first half period, -1 on the second.
double square(double periods)
{
    const double u = periods - std::floor(periods);
    return u < 0.5 ? 1.0 : -1.0;
}

}  // namespace

std::vector<float> grating_columns(const GratingSpec& g, const vision::CameraModel& cam, const StimulusOptics& optics,
                                   double t_s)
{
    const double m = michelson_contrast(g.printed_contrast);
    const double alpha = cam.pixel_angle_deg();
    const double sign = g.drift == Drift::preferred ? 1.0 : -1.0;
    const double shift_deg = sign * g.frequency_hz * g.wavelength_deg * t_s;
    const int n = std::max(1, optics.samples_per_px);

    // Quadrature over the pixel aperture convolved with the blur kernel.
    std::vector<double> offsets, weights;
    const int blur_taps = optics.blur_px > 0 ? 9 : 1;
    double wsum = 0.0;
    for (int b = 0; b < blur_taps; ++b) {
        const double z = blur_taps == 1 ? 0.0 : -3.0 + 6.0 * b / (blur_taps - 1);
        const double wb = std::exp(-0.5 * z * z);
        for (int k = 0; k < n; ++k) {
            offsets.push_back(((k + 0.5) / n - 0.5 + z * optics.blur_px) * alpha);
            weights.push_back(wb);
            wsum += wb;
        }
    }

    std::vector<float> cols(static_cast<std::size_t>(cam.width));
    for (int c = 0; c < cam.width; ++c) {
        const double centre = (c - (cam.width - 1) / 2.0) * alpha;
        double acc = 0.0;
        for (std::size_t k = 0; k < offsets.size(); ++k)
            acc += weights[k] * square((centre + offsets[k] - shift_deg) / g.wavelength_deg + g.phase);
        cols[static_cast<std::size_t>(c)] = static_cast<float>(optics.mean_level * (1.0 + m * acc / wsum));
    }
    return cols;
}

std::vector<vision::CameraEvent> synth_grating_events(const GratingSpec& g, const vision::CameraModel& cam,
                                                      const StimulusOptics& optics)
{
    g.validate();
    const std::int64_t cycle = cam.cycle_us();
    const auto n_frames = static_cast<std::int64_t>(std::llround(g.duration_s * 1e6 / static_cast<double>(cycle)));
    std::vector<vision::CameraEvent> out;
    vision::Frame prev(cam.width, cam.height, 0.0f), cur(cam.width, cam.height, 0.0f);
    for (std::int64_t k = 0; k <= n_frames; ++k) {
        const std::int64_t t_us = k * cycle;
        const auto cols = grating_columns(g, cam, optics, static_cast<double>(t_us) * 1e-6);
        for (int c = 0; c < cam.width; ++c) cur.fill_column(c, cols[static_cast<std::size_t>(c)]);
        if (k > 0) {
            const auto ev = vision::generate_events(prev, cur, t_us, cam);
            out.insert(out.end(), ev.begin(), ev.end());
        }
        std::swap(prev, cur);
    }
    return out;
}

}  // namespace semdnav::charz
