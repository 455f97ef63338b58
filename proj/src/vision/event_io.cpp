#include "semdnav/vision/event_io.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>
#include <string_view>

#include "semdnav/errors.hpp"

namespace semdnav::vision {

namespace {

constexpr std::string_view kHeader = "t_us,x,y,polarity";

template <class T>
T parse_field(std::string_view f, std::size_t line, const char* name)
{
    while (!f.empty() && (f.front() == ' ' || f.front() == '\t')) f.remove_prefix(1);
    while (!f.empty() && (f.back() == ' ' || f.back() == '\t')) f.remove_suffix(1);
    T v{};
    const auto [p, ec] = std::from_chars(f.data(), f.data() + f.size(), v);
    if (ec != std::errc{} || p != f.data() + f.size() || f.empty())
        throw ParseError(std::string("bad ") + name + " '" + std::string(f) + "'", line);
    return v;
}

}  // namespace

std::vector<CameraEvent> read_events(std::istream& is)
{
    std::vector<CameraEvent> out;
    std::string raw;
    std::size_t line = 0;
    bool seen_content = false;
    while (std::getline(is, raw)) {
        ++line;
        std::string_view s(raw);
        if (!s.empty() && s.back() == '\r') s.remove_suffix(1);
        if (line == 1 && s.size() >= 3 && s.substr(0, 3) == "\xEF\xBB\xBF") s.remove_prefix(3);
        if (s.empty() || s.front() == '#') continue;
        if (!seen_content && s == kHeader) {
            seen_content = true;
            continue;
        }
        seen_content = true;

        std::string_view f[4];
        std::size_t n = 0, start = 0;
        for (std::size_t i = 0; i <= s.size(); ++i) {
            if (i == s.size() || s[i] == ',') {
                if (n == 4) throw ParseError("expected 4 fields", line);
                f[n++] = s.substr(start, i - start);
                start = i + 1;
            }
        }
        if (n != 4) throw ParseError("expected 4 fields", line);

        CameraEvent e;
        e.t_us = parse_field<std::int64_t>(f[0], line, "timestamp");
        const auto x = parse_field<long>(f[1], line, "x");
        const auto y = parse_field<long>(f[2], line, "y");
        const auto pol = parse_field<int>(f[3], line, "polarity");
        if (e.t_us < 0) throw ParseError("negative timestamp", line);
        if (x < 0 || x > 65535 || y < 0 || y > 65535) throw ParseError("pixel coordinate out of range", line);
        if (pol != 0 && pol != 1) throw ParseError("polarity must be 0 or 1", line);
        e.x = static_cast<std::uint16_t>(x);
        e.y = static_cast<std::uint16_t>(y);
        e.polarity = pol ? Polarity::on : Polarity::off;
        if (!out.empty() && e.t_us < out.back().t_us) throw ValidationError("timestamp decreases", line);
        out.push_back(e);
    }
    return out;
}

void write_events(std::ostream& os, const std::vector<CameraEvent>& events)
{
    os << kHeader << '\n';
    for (const auto& e : events)
        os << e.t_us << ',' << e.x << ',' << e.y << ',' << (e.polarity == Polarity::on ? 1 : 0) << '\n';
}

std::vector<CameraEvent> load_events(const std::filesystem::path& path)
{
    std::ifstream is(path, std::ios::binary);
    if (!is) throw ParseError("cannot open " + path.string(), 0);
    return read_events(is);
}

void save_events(const std::vector<CameraEvent>& events, const std::filesystem::path& path)
{
    for (std::size_t i = 1; i < events.size(); ++i)
        if (events[i].t_us < events[i - 1].t_us) throw ValidationError("timestamp decreases at event " + std::to_string(i), 0);
    std::ofstream os(path, std::ios::binary);
    if (!os) throw ConfigError("cannot write " + path.string());
    write_events(os, events);
}

}  // namespace semdnav::vision
