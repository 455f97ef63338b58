#pragma once

#include <filesystem>
#include <iosfwd>
#include <vector>

#include "semdnav/vision/camera.hpp"

namespace semdnav::vision {

/// CSV "t_us,x,y,polarity" (1 = ON, 0 = OFF). On input the header line is
/// optional and lines starting with '#' are skipped. Throws ParseError for
/// malformed rows and ValidationError for timestamps going backwards, both
/// carrying the 1-based line number.
std::vector<CameraEvent> read_events(std::istream& is);
void write_events(std::ostream& os, const std::vector<CameraEvent>& events);

std::vector<CameraEvent> load_events(const std::filesystem::path& path);
void save_events(const std::vector<CameraEvent>& events, const std::filesystem::path& path);

}  // namespace semdnav::vision
