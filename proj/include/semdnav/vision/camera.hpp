#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "semdnav/vision/scene.hpp"

namespace semdnav::vision {

/// point: one ray through each column centre. area: the column footprint is
/// split into rays_per_column angular slices and each slice contributes the
/// exact grating mean between its bounding rays, so brightness varies
/// continuously as an edge sweeps across a pixel.
enum class PixelSampling : std::uint8_t { point, area };

const char* to_string(PixelSampling s);
PixelSampling pixel_sampling_from_string(const std::string& s);

struct CameraModel {
    int width = 128;
    int height = 40;
    double fov_deg = 140.0;
    double rate_hz = 200.0;
    std::size_t max_events = 1000;  // per update cycle
    double threshold = 0.1;         // absolute brightness difference
    double background = 0.5;        // rays that hit nothing
    PixelSampling sampling = PixelSampling::area;
    int rays_per_column = 4;        // area sampling: slices per column

    double pixel_angle_deg() const { return fov_deg / width; }
    std::int64_t cycle_us() const;
    /// Viewing direction of a column relative to the heading, CCW positive;
    /// column 0 is the leftmost.
    double column_offset_rad(double col) const;
    void validate() const;
};

struct Pose {
    double x = 0.0;
    double y = 0.0;
    double heading = 0.0;  // rad, CCW from +x
};

/// Row-major brightness grid in [0, 1].
struct Frame {
    int width = 0;
    int height = 0;
    std::vector<float> pixels;

    Frame() = default;
    Frame(int w, int h, float fill) : width(w), height(h), pixels(static_cast<std::size_t>(w) * h, fill) {}
    float at(int x, int y) const { return pixels[static_cast<std::size_t>(y) * width + x]; }
    float& at(int x, int y) { return pixels[static_cast<std::size_t>(y) * width + x]; }
    /// Sets every row of column x.
    void fill_column(int x, float v);
    friend bool operator==(const Frame&, const Frame&) = default;
};

enum class Polarity : std::uint8_t { off = 0, on = 1 };

struct CameraEvent {
    std::int64_t t_us = 0;
    std::uint16_t x = 0;
    std::uint16_t y = 0;
    Polarity polarity = Polarity::on;
    friend bool operator==(const CameraEvent&, const CameraEvent&) = default;
};

/// Raycasts one brightness value per column and replicates it over all rows.
Frame render_frame(const Scene& scene, const Pose& pose, const CameraModel& cam);

/// Per-column brightness, the row-independent part of render_frame.
std::vector<float> render_columns(const Scene& scene, const Pose& pose, const CameraModel& cam);

/// ON where cur - prev > threshold, OFF where prev - cur > threshold, in
/// raster order (row by row), truncated at cam.max_events.
std::vector<CameraEvent> generate_events(const Frame& prev, const Frame& cur, std::int64_t t_us,
                                         const CameraModel& cam);

}  // namespace semdnav::vision
