#include "semdnav/run_config.hpp"

#include <cstdio>
#include <fstream>
#include <initializer_list>
#include <set>
#include <type_traits>

#include "semdnav/errors.hpp"

namespace semdnav {

using nlohmann::json;

namespace {

// One field table drives both directions: Reader overlays a JSON object on
// the defaults, Writer emits the resolved values.
class Reader {
public:
    Reader(const json& j, std::string path) : j_(j), path_(std::move(path))
    {
        if (!j_.is_object()) fail(path_.empty() ? "config" : path_, "expected an object");
    }
    ~Reader() noexcept(false)
    {
        if (std::uncaught_exceptions()) return;
        for (const auto& [k, v] : j_.items())
            if (!seen_.count(k)) fail(sub(k), "unknown key");
    }

    template <class T>
    void field(const char* key, T& value)
    {
        const auto it = find(key);
        if (!it) return;
        read(**it, value, sub(key));
    }

    template <class E>
    void enumeration(const char* key, E& value, std::initializer_list<E> all)
    {
        const auto it = find(key);
        if (!it) return;
        if (!(*it)->is_string()) fail(sub(key), "expected a string");
        for (E e : all)
            if ((*it)->template get<std::string>() == to_string(e)) {
                value = e;
                return;
            }
        fail(sub(key), "unknown value '" + (*it)->template get<std::string>() + "'");
    }

    template <class E>
    void enum_list(const char* key, std::vector<E>& value, std::initializer_list<E> all)
    {
        const auto it = find(key);
        if (!it) return;
        if (!(*it)->is_array()) fail(sub(key), "expected an array");
        value.clear();
        for (const auto& x : **it) {
            bool ok = false;
            for (E e : all)
                if (x.is_string() && x.get<std::string>() == to_string(e)) {
                    value.push_back(e);
                    ok = true;
                }
            if (!ok) fail(sub(key), "unknown value " + x.dump());
        }
    }

    /// Accepted and ignored (e.g. the provenance block of an echoed config).
    void skip(const char* key) { seen_.insert(key); }

    template <class F>
    void object(const char* key, F&& body)
    {
        const auto it = find(key);
        if (!it) return;
        Reader r(**it, sub(key));
        body(r);
    }

private:
    std::optional<const json*> find(const char* key)
    {
        seen_.insert(key);
        const auto it = j_.find(key);
        if (it == j_.end()) return std::nullopt;
        return &*it;
    }
    std::string sub(const std::string& k) const { return path_.empty() ? k : path_ + "." + k; }
    [[noreturn]] static void fail(const std::string& path, const std::string& why)
    {
        throw ConfigError(path + ": " + why);
    }

    static void read(const json& j, bool& v, const std::string& p)
    {
        if (!j.is_boolean()) fail(p, "expected true or false");
        v = j.get<bool>();
    }
    static void read(const json& j, double& v, const std::string& p)
    {
        if (!j.is_number()) fail(p, "expected a number");
        v = j.get<double>();
    }
    template <class T>
        requires std::is_integral_v<T>
    static void read(const json& j, T& v, const std::string& p)
    {
        if (!j.is_number_integer() && !j.is_number_unsigned()) fail(p, "expected an integer");
        if (std::is_unsigned_v<T> && j.is_number_integer() && j.get<std::int64_t>() < 0) fail(p, "must be >= 0");
        v = j.get<T>();
    }
    static void read(const json& j, std::string& v, const std::string& p)
    {
        if (!j.is_string()) fail(p, "expected a string");
        v = j.get<std::string>();
    }
    template <class T>
    static void read(const json& j, std::vector<T>& v, const std::string& p)
    {
        if (!j.is_array()) fail(p, "expected an array");
        v.clear();
        for (std::size_t i = 0; i < j.size(); ++i) {
            T x{};
            read(j[i], x, p + "[" + std::to_string(i) + "]");
            v.push_back(x);
        }
    }

    const json& j_;
    std::string path_;
    std::set<std::string> seen_;
};

class Writer {
public:
    explicit Writer(json& j) : j_(j) { j_ = json::object(); }

    template <class T>
    void field(const char* key, T& value)
    {
        j_[key] = value;
    }
    template <class E>
    void enumeration(const char* key, E& value, std::initializer_list<E>)
    {
        j_[key] = to_string(value);
    }
    template <class E>
    void enum_list(const char* key, std::vector<E>& value, std::initializer_list<E>)
    {
        json a = json::array();
        for (E e : value) a.push_back(to_string(e));
        j_[key] = a;
    }
    void skip(const char*) {}

    template <class F>
    void object(const char* key, F&& body)
    {
        Writer w(j_[key]);
        body(w);
    }

private:
    json& j_;
};

template <class V>
void visit_lif(V& v, snn::LifParams& p)
{
    v.field("e_l_mV", p.e_l_mv);
    v.field("c_m_pF", p.c_m_pf);
    v.field("tau_m_ms", p.tau_m_ms);
    v.field("t_ref_ms", p.t_ref_ms);
    v.field("tau_syn_exc_ms", p.tau_syn_exc_ms);
    v.field("tau_syn_inh_ms", p.tau_syn_inh_ms);
    v.field("v_th_mV", p.v_th_mv);
    v.field("v_reset_mV", p.v_reset_mv);
    v.field("v_init_mV", p.v_init_mv);
    v.field("i_offset_nA", p.i_offset_na);
}

template <class V>
void visit_network(V& v, net::NetConfig& c)
{
    v.object("sizes", [&](auto& s) {
        s.field("columns", c.sizes.columns);
        s.field("rows", c.sizes.rows);
        s.field("wta", c.sizes.wta);
        s.field("gi", c.sizes.gi);
        s.field("et", c.sizes.et);
        s.field("ofi", c.sizes.ofi);
        s.field("mot", c.sizes.mot);
        s.field("pois1", c.sizes.pois1);
        s.field("pois2", c.sizes.pois2);
    });
    v.object("neurons", [&](auto& n) {
        n.object("sptc", [&](auto& x) { visit_lif(x, c.neurons.sptc); });
        n.object("tde", [&](auto& x) { visit_lif(x, c.neurons.tde); });
        n.object("int", [&](auto& x) { visit_lif(x, c.neurons.integ); });
        n.object("wta", [&](auto& x) { visit_lif(x, c.neurons.wta); });
        n.object("mot", [&](auto& x) { visit_lif(x, c.neurons.mot); });
        n.object("gi", [&](auto& x) { visit_lif(x, c.neurons.gi); });
        n.object("ofi", [&](auto& x) { visit_lif(x, c.neurons.ofi); });
        n.object("et", [&](auto& x) { visit_lif(x, c.neurons.et); });
    });
    v.object("weights", [&](auto& w) {
        auto& x = c.weights;
        w.field("dvs_sptc_nA", x.dvs_sptc);
        w.field("sptc_tde_nA", x.sptc_tde);
        w.field("tde_int_nA", x.tde_int);
        w.field("int_wta_center_nA", x.int_wta_center);
        w.field("int_wta_flank_nA", x.int_wta_flank);
        w.field("int_ofi_nA", x.int_ofi);
        w.field("wta_mot_nA", x.wta_mot);
        w.field("wta_gi_nA", x.wta_gi);
        w.field("wta_recurrent_nA", x.wta_recurrent);
        w.field("et_mot_nA", x.et_mot);
        w.field("et_gi_nA", x.et_gi);
        w.field("gi_et_nA", x.gi_et);
        w.field("gi_wta_nA", x.gi_wta);
        w.field("mot_wta_nA", x.mot_wta);
        w.field("mot_et_nA", x.mot_et);
        w.field("mot_sptc_nA", x.mot_sptc);
        w.field("mot_cross_nA", x.mot_cross);
        w.field("mot_wave_nA", x.mot_wave);
        w.field("mot_self_nA", x.mot_self);
        w.field("pois1_wta_nA", x.pois1_wta);
        w.field("pois2_et_nA", x.pois2_et);
        w.field("pois2_et_scale", x.pois2_et_scale);
    });
    v.object("delays", [&](auto& d) {
        d.field("synapse_ms", c.delays.synapse_ms);
        d.field("mot_wave_ms", c.delays.mot_wave_ms);
        d.field("wta_recurrent_ms", c.delays.wta_recurrent_ms);
        d.field("camera_ms", c.delays.camera_ms);
    });
    v.field("n_connect", c.n_connect);
    v.field("tau_fac_ms", c.tau_fac_ms);
    v.field("pois1_rate_Hz", c.pois1_rate_hz);
    v.field("pois2_rate_Hz", c.pois2_rate_hz);
    v.field("mot2_literal_mapping", c.mot2_literal_mapping);
    v.field("max_pending", c.max_pending);
}

template <class V>
void visit_camera(V& v, vision::CameraModel& c)
{
    v.field("width_px", c.width);
    v.field("height_px", c.height);
    v.field("fov_deg", c.fov_deg);
    v.field("rate_Hz", c.rate_hz);
    v.field("max_events", c.max_events);
    v.field("threshold", c.threshold);
    v.field("background", c.background);
    v.enumeration("sampling", c.sampling, {vision::PixelSampling::point, vision::PixelSampling::area});
    v.field("rays_per_column", c.rays_per_column);
}

template <class V>
void visit_environment(V& v, world::EnvSpec& e)
{
    using world::EnvKind;
    v.enumeration("kind", e.kind,
                  {EnvKind::clutter, EnvKind::corridor, EnvKind::gap_arena, EnvKind::empty_box,
                   EnvKind::narrowing_corridor});
    v.field("density_pct", e.density_pct);
    v.field("clutter_side_au", e.clutter_side_au);
    v.field("corridor_width_au", e.corridor_width_au);
    v.field("corridor_length_au", e.corridor_length_au);
    v.field("gap_au", e.gap_au);
    v.field("fixed_gap_au", e.fixed_gap_au);
    v.field("gap_room_width_au", e.gap_room_width_au);
    v.field("gap_room_height_au", e.gap_room_height_au);
    v.field("box_side_au", e.box_side_au);
    v.field("narrow_start_au", e.narrow_start_au);
    v.field("narrow_end_au", e.narrow_end_au);
    v.field("obstacle_m", e.obstacle_m);
    v.field("start_clear_m", e.start_clear_m);
    v.field("grating_period_m", e.grating_period_m);
    v.field("max_attempts", e.max_attempts);
}

template <class V>
void visit(V& v, RunConfig& c)
{
    v.object("network", [&](auto& n) { visit_network(n, c.episode.network); });
    v.object("camera", [&](auto& x) { visit_camera(x, c.episode.camera); });
    v.object("motor", [&](auto& m) {
        m.field("omega_deg_s", c.episode.motor.omega_deg_s);
        m.field("saccade_speed_au_s", c.episode.motor.saccade_speed_au_s);
        m.field("hop_ms", c.episode.motor.hop_ms);
    });
    v.object("episode", [&](auto& e) {
        e.field("budget_s", c.episode.budget_s);
        e.field("adaptive_velocity", c.episode.adaptive_velocity);
        e.field("fixed_velocity_au_s", c.episode.fixed_velocity_au_s);
        e.field("ofi_min_window_ms", c.episode.ofi_min_window_ms);
        e.field("record_populations", c.episode.record_populations);
    });
    v.object("environment", [&](auto& e) { visit_environment(e, c.environment); });
    v.object("characterize", [&](auto& ch) {
        auto& t = c.characterize;
        ch.field("frequencies_Hz", t.grid.frequencies_hz);
        ch.field("printed_contrasts", t.grid.printed_contrasts);
        ch.enum_list("directions", t.grid.drifts, {charz::Drift::preferred, charz::Drift::null});
        ch.field("repetitions", t.grid.repetitions);
        ch.field("wavelength_deg", t.grid.wavelength_deg);
        ch.field("duration_s", t.grid.duration_s);
        ch.enumeration("pathway", t.pathway, {charz::Pathway::on, charz::Pathway::off, charz::Pathway::both});
        ch.object("optics", [&](auto& o) {
            o.field("blur_px", t.optics.blur_px);
            o.field("samples_per_px", t.optics.samples_per_px);
            o.field("mean_level", t.optics.mean_level);
        });
        ch.object("camera", [&](auto& x) { visit_camera(x, t.camera); });
    });
    v.object("seeds", [&](auto& s) {
        s.field("environment", c.env_seed);
        s.field("network", c.net_seed);
    });
    v.field("output_dir", c.output_dir);
    v.field("parallelism", c.parallelism);
    v.skip("provenance");
}

}  // namespace

void RunConfig::finalize()
{
    episode.network.seed = net_seed;
    characterize.network = episode.network;
    characterize.seed = net_seed;
    characterize.parallelism = parallelism;
    episode.validate();
    environment.validate();
    characterize.camera.validate();
    if (characterize.grid.repetitions < 1) throw ConfigError("characterize.repetitions: must be >= 1");
    if (!(characterize.grid.duration_s > 0)) throw ConfigError("characterize.duration_s: must be > 0");
    if (!(characterize.grid.wavelength_deg > 0)) throw ConfigError("characterize.wavelength_deg: must be > 0");
    for (double f : characterize.grid.frequencies_hz)
        if (!(f > 0)) throw ConfigError("characterize.frequencies_Hz: must be > 0");
    for (double c : characterize.grid.printed_contrasts)
        if (!(c >= 0 && c <= 1)) throw ConfigError("characterize.printed_contrasts: must lie in [0, 1]");
    if (characterize.optics.samples_per_px < 1) throw ConfigError("characterize.optics.samples_per_px: must be >= 1");
    if (parallelism < 1) throw ConfigError("parallelism: must be >= 1");
}

RunConfig run_config_from_json(const json& j)
{
    RunConfig c;
    {
        Reader r(j, "");
        visit(r, c);
    }
    return c;
}

RunConfig load_run_config(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw ConfigError(path + ": cannot open");
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError(path + ": " + e.what());
    }
    return run_config_from_json(j);
}

json to_json(const RunConfig& c)
{
    json j;
    RunConfig copy = c;
    Writer w(j);
    visit(w, copy);
    return j;
}

std::string config_hash(const RunConfig& c)
{
    json j = to_json(c);
    j.erase("output_dir");  // neither affects results
    j.erase("parallelism");
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char ch : j.dump()) {
        h ^= ch;
        h *= 0x100000001b3ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

}  // namespace semdnav
