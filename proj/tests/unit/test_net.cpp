#include <catch_amalgamated.hpp>

#include <cmath>
#include <map>
#include <sstream>

#include "semdnav/errors.hpp"
#include "semdnav/net/assemble.hpp"
#include "semdnav/net/motor.hpp"

using namespace semdnav;
using namespace semdnav::net;
using Catch::Approx;

namespace {

std::size_t count_rows(const Assembly& a, const std::string& name)
{
    for (const auto& r : a.rows)
        if (r.row == name) return r.connections;
    FAIL("no row " << name);
    return 0;
}

}  // namespace

TEST_CASE("census stays within 20% of 4k neurons and 300k synapses", "[net]")
{
    const auto a = assemble(NetConfig{});
    std::size_t neurons = 0;
    for (const auto& p : a.spec.populations) neurons += p.size;
    CHECK(neurons == 1280 * 3 + 128 + 64 + 3 + 192 + 65);
    CHECK(std::abs(neurons / 4000.0 - 1.0) <= 0.2);
    CHECK(std::abs(a.spec.connections.size() / 300000.0 - 1.0) <= 0.2);
}

TEST_CASE("every wiring row is realised with the expected fan-out", "[net]")
{
    const auto a = assemble(NetConfig{});
    CHECK(count_rows(a, "SPTC->TDE_LR facilitator") == 63 * 20);
    CHECK(count_rows(a, "TDE_RL->INT_RL") == 1280);
    CHECK(count_rows(a, "INT_LR->OFI") == 64);
    CHECK(count_rows(a, "MOT1->SPTC") == 96 * 1280);
    CHECK(count_rows(a, "MOT2 wave") == 95);
    CHECK(count_rows(a, "WTA->MOT1") == 32);
    CHECK(count_rows(a, "POIS2->ET") == 1);
    // Neighbourhood of 4 on each side, clipped at the edges.
    std::size_t expect = 0;
    for (int i = 0; i < 64; ++i) expect += std::min(63, i + 4) - std::max(0, i - 4) + 1;
    CHECK(count_rows(a, "INT_LR->WTA") == expect);
}

TEST_CASE("left-right detectors are armed by their own column and triggered by the next", "[net]")
{
    const auto a = assemble(NetConfig{});
    const auto& id = a.ids;
    for (const auto& c : a.spec.connections) {
        if (c.source.pop != id.sptc) continue;
        if (c.target.pop == id.tde_lr && c.kind == snn::SynapseKind::facilitatory) CHECK(c.source.index == c.target.index);
        if (c.target.pop == id.tde_lr && c.kind == snn::SynapseKind::trigger) CHECK(c.source.index == c.target.index + 1);
        if (c.target.pop == id.tde_rl && c.kind == snn::SynapseKind::facilitatory) CHECK(c.source.index == c.target.index + 1);
        if (c.target.pop == id.tde_rl && c.kind == snn::SynapseKind::trigger) CHECK(c.source.index == c.target.index);
    }
}

TEST_CASE("flank weights reproduce the tabulated neighbourhood", "[net]")
{
    NetConfig c;
    CHECK(c.flank_weight(0) == -5.0);
    CHECK(c.flank_weight(1) == -3.0);
    CHECK(c.flank_weight(2) == -2.0);
    CHECK(c.flank_weight(3) == -1.5);
    c.weights.int_wta_flank = {-1, -1, -1, -1};
    CHECK(c.flank_weight(4) == -1.0);
}

TEST_CASE("configuration errors name the field", "[net][errors]")
{
    NetConfig c;
    c.weights.mot_wta = 1.0;
    CHECK_THROWS_WITH(c.validate(), Catch::Matchers::ContainsSubstring("network.weights.mot_wta_nA"));
    c = {};
    c.delays.mot_wave_ms = 0.05;
    CHECK_THROWS_WITH(c.validate(), Catch::Matchers::ContainsSubstring("network.delays.mot_wave_ms"));
    c = {};
    c.sizes.wta = 32;
    CHECK_THROWS_AS(c.validate(), ConfigError);
}

TEST_CASE("event mapping onto 2x2 macropixels", "[net]")
{
    NetSizes s;
    using vision::CameraEvent;
    auto in = map_events_to_sptc({CameraEvent{0, 0, 0}, CameraEvent{0, 2, 3}, CameraEvent{0, 3, 2},
                                  CameraEvent{0, 3, 3}, CameraEvent{0, 127, 39}, CameraEvent{0, 128, 0}},
                                 s);
    REQUIRE(in.targets.size() == 5);
    CHECK(in.targets[0] == 0);
    CHECK(in.targets[1] == 1 * 64 + 1);
    CHECK(in.targets[2] == 65);
    CHECK(in.targets[3] == 65);
    CHECK(in.targets[4] == 19 * 64 + 63);
    CHECK(in.rejected == 1);
}

TEST_CASE("macropixel needs three coincident events", "[net]")
{
    // Single SPTC cell fed directly; counts spikes for n events in one tick.
    auto fires = [](int n) {
        NetConfig c;
        snn::NetworkSpec spec;
        snn::PopulationSpec p;
        p.name = "SPTC";
        p.size = 1;
        p.lif = c.neurons.sptc;
        spec.add_population(p);
        snn::Network net(spec);
        for (int i = 0; i < n; ++i) net.inject({0, 0}, c.weights.dvs_sptc, snn::SynapseKind::excitatory, 1);
        return net.run(snn::ms_to_ticks(20.0)).events.size();
    };
    CHECK(fires(1) == 0);
    CHECK(fires(2) == 0);
    CHECK(fires(3) == 1);
    CHECK(fires(4) == 1);
}

TEST_CASE("motor decoding", "[net][motor]")
{
    const MotorConfig cfg;
    auto dur_ms = [&](Decision d) { return snn::ticks_to_ms(decode_motor(d, cfg).remaining); };
    CHECK(injection_index({false, 31}) == 94);
    CHECK(dur_ms({false, 31}) == Approx(20.0));
    CHECK(decode_motor({false, 31}).mode == MotorMode::turn_left);
    CHECK(injection_index({false, 0}) == 50);
    CHECK(dur_ms({false, 0}) == Approx(460.0));
    CHECK(dur_ms({true, 0}) == Approx(960.0));
    CHECK(decode_motor({true, 0}).mode == MotorMode::turn_left);
    CHECK(decode_motor({false, 32}).mode == MotorMode::turn_right);
    CHECK(injection_index({false, 32}) == 94);  // mirror of 31
    CHECK(injection_index({false, 53}) == 52);
    CHECK(injection_index({false, 63}) == 50);
    CHECK(decode_motor({false, 12}).v_forward_au_s == Approx(0.38));
    CHECK_THROWS_AS(decode_motor({false, 64}), ConfigError);

    MotorConfig literal = cfg;
    literal.mot2_literal_mapping = true;
    CHECK(injection_index({false, 40}, literal) == 95);
}

TEST_CASE("saturation for winners far from the centre", "[net][motor]")
{
    for (std::uint32_t i = 0; i <= 8; ++i) CHECK(injection_index({false, i}) == 50);
    for (std::uint32_t i = 54; i < 64; ++i) CHECK(injection_index({false, i}) == 50);
    // Durations grow monotonically with the distance from the centre.
    for (std::uint32_t i = 9; i < 31; ++i) CHECK(decode_motor({false, i}).remaining > decode_motor({false, i + 1}).remaining);
}

TEST_CASE("intersaccade velocity from the OFI rate", "[net][motor]")
{
    CHECK(intersaccade_velocity_au_s(0.0) == Approx(2.5));
    CHECK(intersaccade_velocity_mps(1000.0) == 0.0);
    CHECK(intersaccade_velocity_mps(1500.0) == 0.0);
    CHECK(intersaccade_velocity_mps(400.0) == Approx(0.6));
    CHECK(intersaccade_velocity_au_s(400.0) == Approx(1.5));
}

TEST_CASE("gap aperture of the inverse WTA", "[net]")
{
    CHECK(gap_min_deg(0) == Approx(2.1875).epsilon(1e-12));
    CHECK(gap_min_deg(3) == Approx(15.3125).epsilon(1e-12));
    CHECK(gap_min_deg(4) == Approx(19.6875).epsilon(1e-12));
    for (std::uint32_t n = 0; n < 10; ++n) CHECK(gap_min_deg(n) == Approx((2.0 * n + 1) * 140.0 / 64.0));
}

TEST_CASE("OFI readout is a mean over the window", "[net]")
{
    OfiReadout r;
    CHECK(r.mean_rate_hz() == 0.0);
    r.add(3, 5.0);
    r.add(1, 5.0);
    CHECK(r.mean_rate_hz() == Approx(400.0));
    r.reset();
    CHECK(r.window_ms() == 0.0);
}

TEST_CASE("free-running inverse WTA wanders", "[net][wta]")
{
    NetConfig c;
    c.sizes = {0, 0, 64, 1, 0, 0, 0, 64, 0};
    c.seed = 3;
    const auto a = assemble(c);
    snn::Network net(a.spec);
    const auto rec = net.run(snn::ms_to_ticks(60000.0), {a.ids.wta});
    std::map<std::uint32_t, double> hist;
    for (const auto& s : rec.events) hist[s.index] += 1;
    double h = 0.0;
    for (auto& [k, n] : hist) {
        const double p = n / static_cast<double>(rec.events.size());
        h -= p * std::log2(p);
    }
    INFO("winners " << rec.events.size());
    CHECK(h > 3.0);
}

TEST_CASE("wiring dump lists every connection", "[net]")
{
    NetConfig c;
    const auto a = assemble(c);
    std::ostringstream os;
    write_wiring_csv(os, a.spec);
    const std::string s = os.str();
    CHECK(s.rfind("src_pop,src_idx,dst_pop,dst_idx,weight_nA,delay_ms,kind\n", 0) == 0);
    CHECK(static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n')) == a.spec.connections.size() + 1);
}

TEST_CASE("motor wave delay absorbs the membrane latency", "[net][motor]")
{
    NetConfig c;
    const auto d = mot_wave_delay_ticks(c);
    CHECK(d > snn::ms_to_ticks(9.0));
    CHECK(d < snn::ms_to_ticks(10.0));
}
