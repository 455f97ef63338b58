#include <catch_amalgamated.hpp>

#include "semdnav/errors.hpp"
#include "semdnav/run_config.hpp"
#include "semdnav/validate.hpp"

using namespace semdnav;
using nlohmann::json;
using Catch::Matchers::ContainsSubstring;

TEST_CASE("resolved config reads back unchanged", "[config]")
{
    RunConfig c;
    c.environment.kind = world::EnvKind::gap_arena;
    c.environment.gap_au = 8.0;
    c.episode.network.weights.int_ofi = 0.02;
    c.episode.camera.sampling = vision::PixelSampling::point;
    c.characterize.grid.frequencies_hz = {1.0, 5.0};
    c.env_seed = 9;
    const json j = to_json(c);
    const RunConfig back = run_config_from_json(j);
    CHECK(to_json(back) == j);
    CHECK(config_hash(back) == config_hash(c));
}

TEST_CASE("omitted keys keep their defaults", "[config]")
{
    const auto c = run_config_from_json(json::parse(R"({"environment": {"kind": "corridor"}})"));
    CHECK(c.environment.kind == world::EnvKind::corridor);
    CHECK(c.environment.corridor_width_au == 15.0);
    CHECK(c.episode.camera.threshold == 0.02);
    CHECK(c.characterize.camera.threshold == 0.1);
}

TEST_CASE("hash ignores where and how fast a run executes", "[config]")
{
    RunConfig a, b;
    b.output_dir = "elsewhere";
    b.parallelism = 8;
    CHECK(config_hash(a) == config_hash(b));
    b.net_seed = 2;
    CHECK(config_hash(a) != config_hash(b));
    CHECK(config_hash(a).size() == 16);
}

TEST_CASE("config errors carry the field path", "[config][errors]")
{
    CHECK_THROWS_WITH(run_config_from_json(json::parse(R"({"network": {"weights": {"bogus_nA": 1}}})")),
                      ContainsSubstring("network.weights.bogus_nA") && ContainsSubstring("unknown key"));
    CHECK_THROWS_WITH(run_config_from_json(json::parse(R"({"network": {"neurons": {"sptc": {"tau_m_ms": "x"}}}})")),
                      ContainsSubstring("network.neurons.sptc.tau_m_ms"));
    CHECK_THROWS_WITH(run_config_from_json(json::parse(R"({"environment": {"kind": "maze"}})")),
                      ContainsSubstring("environment.kind"));
    auto bad_rate = run_config_from_json(json::parse(R"({"camera": {"rate_Hz": -1}})"));
    CHECK_THROWS_AS(bad_rate.finalize(), ConfigError);
    CHECK_THROWS_AS(load_run_config("/nonexistent/config.json"), ConfigError);
}

TEST_CASE("finalize hands the network to the characterization", "[config]")
{
    RunConfig c;
    c.episode.network.tau_fac_ms = 7.0;
    c.net_seed = 5;
    c.parallelism = 2;
    c.finalize();
    CHECK(c.characterize.network.tau_fac_ms == 7.0);
    CHECK(c.characterize.seed == 5);
    CHECK(c.characterize.parallelism == 2);
}

TEST_CASE("validate faults are caught by their checks", "[validate]")
{
    validate::Options opt;
    opt.oracle_sequences = 5;
    CHECK(validate::check_tde_monotonicity(opt).passed);
    CHECK(validate::check_wave_timing(opt).passed);
    CHECK(validate::check_census(opt).passed);
    CHECK(validate::check_kernel_oracle(opt).passed);

    opt.fault = validate::Fault::tde_gain_grows;
    CHECK_FALSE(validate::check_tde_monotonicity(opt).passed);

    opt.fault = validate::Fault::no_mot_wta_inhibition;
    opt.episode_s = 2.0;
    CHECK_FALSE(validate::check_saccadic_suppression(opt).passed);

    CHECK(validate::fault_from_string("tde_gain_grows") == validate::Fault::tde_gain_grows);
    CHECK_THROWS_AS(validate::fault_from_string("melt"), ConfigError);
}
