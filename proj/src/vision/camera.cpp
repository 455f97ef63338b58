#include "semdnav/vision/camera.hpp"

#include <cmath>
#include <optional>

#include "semdnav/errors.hpp"

namespace semdnav::vision {

const char* to_string(PixelSampling s) { return s == PixelSampling::point ? "point" : "area"; }

PixelSampling pixel_sampling_from_string(const std::string& s)
{
    if (s == "point") return PixelSampling::point;
    if (s == "area") return PixelSampling::area;
    throw ConfigError("camera.sampling: expected 'point' or 'area', got '" + s + "'");
}

std::int64_t CameraModel::cycle_us() const { return static_cast<std::int64_t>(std::llround(1e6 / rate_hz)); }

double CameraModel::column_offset_rad(double col) const
{
    return -deg_to_rad((col - (width - 1) / 2.0) * pixel_angle_deg());
}

void CameraModel::validate() const
{
    if (width <= 0 || height <= 0) throw ConfigError("camera: width and height must be > 0");
    if (!(fov_deg > 0 && fov_deg < 360)) throw ConfigError("camera: fov_deg must lie in (0, 360)");
    if (!(rate_hz > 0)) throw ConfigError("camera: rate_hz must be > 0");
    if (!(threshold >= 0)) throw ConfigError("camera: threshold must be >= 0");
    if (!(background >= 0 && background <= 1)) throw ConfigError("camera: background must lie in [0, 1]");
    if (rays_per_column < 1) throw ConfigError("camera: rays_per_column must be >= 1");
}

void Frame::fill_column(int x, float v)
{
    for (int y = 0; y < height; ++y) at(x, y) = v;
}

std::vector<float> render_columns(const Scene& scene, const Pose& pose, const CameraModel& cam)
{
    std::vector<float> cols(static_cast<std::size_t>(cam.width), static_cast<float>(cam.background));
    if (scene.empty()) return cols;
    const Vec2 origin{pose.x, pose.y};
    auto cast = [&](double col) { return scene.cast(origin, unit_vector(pose.heading + cam.column_offset_rad(col))); };
    auto point = [&](const std::optional<SurfaceHit>& h) {
        return h ? scene.surfaces()[h->surface].brightness_at(h->along) : cam.background;
    };

    if (cam.sampling == PixelSampling::point) {
        for (int c = 0; c < cam.width; ++c) cols[static_cast<std::size_t>(c)] = static_cast<float>(point(cast(c)));
        return cols;
    }

    // Slice boundaries are shared between neighbouring columns.
    const int n = cam.rays_per_column;
    std::vector<std::optional<SurfaceHit>> edge(static_cast<std::size_t>(cam.width * n + 1));
    for (std::size_t k = 0; k < edge.size(); ++k) edge[k] = cast(-0.5 + static_cast<double>(k) / n);
    for (int c = 0; c < cam.width; ++c) {
        double acc = 0.0;
        for (int k = 0; k < n; ++k) {
            const auto i = static_cast<std::size_t>(c * n + k);
            const auto& a = edge[i];
            const auto& b = edge[i + 1];
            if (a && b && a->surface == b->surface) {
                acc += scene.surfaces()[a->surface].mean_brightness(a->along, b->along);
            } else {
                // Occlusion boundary inside the slice: split it evenly.
                acc += 0.5 * (point(a) + point(b));
            }
        }
        cols[static_cast<std::size_t>(c)] = static_cast<float>(acc / n);
    }
    return cols;
}

Frame render_frame(const Scene& scene, const Pose& pose, const CameraModel& cam)
{
    const auto cols = render_columns(scene, pose, cam);
    Frame f(cam.width, cam.height, 0.0f);
    for (int c = 0; c < cam.width; ++c) f.fill_column(c, cols[static_cast<std::size_t>(c)]);
    return f;
}

std::vector<CameraEvent> generate_events(const Frame& prev, const Frame& cur, std::int64_t t_us,
                                         const CameraModel& cam)
{
    if (prev.width != cur.width || prev.height != cur.height) throw ConfigError("generate_events: frame size mismatch");
    std::vector<CameraEvent> out;
    const double th = cam.threshold;
    for (int y = 0; y < cur.height; ++y) {
        for (int x = 0; x < cur.width; ++x) {
            if (out.size() >= cam.max_events) return out;
            const double d = static_cast<double>(cur.at(x, y)) - static_cast<double>(prev.at(x, y));
            if (d > th)
                out.push_back({t_us, static_cast<std::uint16_t>(x), static_cast<std::uint16_t>(y), Polarity::on});
            else if (-d > th)
                out.push_back({t_us, static_cast<std::uint16_t>(x), static_cast<std::uint16_t>(y), Polarity::off});
        }
    }
    return out;
}

}  // namespace semdnav::vision
