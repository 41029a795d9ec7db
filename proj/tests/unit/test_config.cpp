#include <doctest.h>

#include <string>

#include "oqrw/config.hpp"
#include "oqrw/presets.hpp"

using namespace oqrw;

TEST_SUITE_BEGIN("config");

TEST_CASE("serialize/parse round trip is the identity") {
    ExperimentConfig c;
    c.mode = Mode::sde;
    c.seed = 987654321;
    c.a = 2.0;
    c.omega0 = 0.5;
    c.epsilon = 1e-4;
    c.rho0 = "pure-up";
    c.t_max = 123.5;
    c.dt = 2.5e-3;
    c.n_trajectories = 42;
    c.histogram_times = {1.5, 3.0};
    c.out_dir = "/tmp/some_dir";
    c.threads = 3;
    std::string text = serialize_config(c);
    ExperimentConfig back = parse_config(text);
    CHECK(serialize_config(back) == text);

    ExperimentConfig uv;
    uv.mode = Mode::discrete;
    uv.use_uvrs = true;
    uv.u = 1.1;
    uv.v = 1.0;
    uv.r = 0.00015;
    uv.s = -0.00015;
    std::string text2 = serialize_config(uv);
    CHECK(serialize_config(parse_config(text2)) == text2);
}

TEST_CASE("parser reports the offending entry") {
    CHECK_THROWS_WITH_AS(parse_config("[run]\nmode = warp\n"),
                         doctest::Contains("run.mode"), ConfigError);
    CHECK_THROWS_WITH_AS(parse_config("[run]\nbogus_key = 1\n"),
                         doctest::Contains("run.bogus_key"), ConfigError);
    CHECK_THROWS_WITH_AS(parse_config("[nosuch]\nx = 1\n"), doctest::Contains("nosuch"),
                         ConfigError);
    CHECK_THROWS_WITH_AS(parse_config("[model]\na = fast\n"), doctest::Contains("model.a"),
                         ConfigError);
    CHECK_THROWS_WITH_AS(parse_config("mode = sde\n"), doctest::Contains("outside"),
                         ConfigError);
}

TEST_CASE("validation names the violated field") {
    ExperimentConfig c;
    c.mode = Mode::sde;
    c.dt = -1.0;
    CHECK_THROWS_WITH_AS(validate(c), doctest::Contains("sde.dt"), ConfigError);

    ExperimentConfig c2;
    c2.mode = Mode::sde;
    c2.use_uvrs = true;
    CHECK_THROWS_WITH_AS(validate(c2), doctest::Contains("parametrization"), ConfigError);

    ExperimentConfig c3;
    c3.mode = Mode::discrete;
    c3.n_steps = 0;
    CHECK_THROWS_WITH_AS(validate(c3), doctest::Contains("discrete.n_steps"), ConfigError);

    ExperimentConfig c4;
    c4.mode = Mode::analyze;
    CHECK_THROWS_WITH_AS(validate(c4), doctest::Contains("analyze.in_dir"), ConfigError);

    ExperimentConfig c5;
    c5.flip_hysteresis = 1.5;
    CHECK_THROWS_WITH_AS(validate(c5), doctest::Contains("flip_hysteresis"), ConfigError);

    ExperimentConfig c6;
    c6.mode = Mode::discrete;
    c6.rho0 = "q:2,0,0";  // outside the Bloch ball
    CHECK_THROWS_WITH_AS(validate(c6), doctest::Contains("rho0"), ConfigError);
}

TEST_CASE("overrides address section.key") {
    ExperimentConfig c;
    apply_override(c, "model.a=3.5");
    CHECK(c.a == 3.5);
    apply_override(c, "run.seed=99");
    CHECK(c.seed == 99);
    apply_override(c, "ensemble.histogram_times=1,2,3");
    CHECK(c.histogram_times.size() == 3);
    CHECK_THROWS_AS(apply_override(c, "no_dot=1"), ConfigError);
    CHECK_THROWS_AS(apply_override(c, "model.zzz=1"), ConfigError);
}

TEST_CASE("rho0 specs resolve to valid states") {
    ExperimentConfig c;
    c.rho0 = "maximally-mixed";
    CHECK(c.rho0_state().norm_sq() == 0.0);
    c.rho0 = "pure-up";
    CHECK(c.rho0_state().q3 == 1.0);
    c.rho0 = "pure-down";
    CHECK(c.rho0_state().q3 == -1.0);
    c.rho0 = "q:0.1,0,0.2";
    BlochState s = c.rho0_state();
    CHECK(s.q1 == 0.1);
    CHECK(s.q3 == 0.2);
    c.rho0 = "sideways";
    CHECK_THROWS_AS(c.rho0_state(), ConfigError);
}

TEST_CASE("derived quantities from either parametrization") {
    ExperimentConfig c;
    c.a = 2.0;
    c.omega0 = 1.0;
    CHECK(c.a2_over_omega0() == doctest::Approx(4.0));

    ExperimentConfig uv;
    uv.use_uvrs = true;
    uv.u = 1.1;
    uv.v = 1.0;
    uv.r = 0.00015;
    uv.s = -0.00015;
    // per-step map gives ~15.9 for the seesaw-regime parameters
    CHECK(uv.a2_over_omega0() == doctest::Approx(15.89).epsilon(0.01));
    CHECK(uv.kraus().unitarity_residual() < 1e-14);
}

TEST_CASE("presets expand to valid configs") {
    for (const auto& name : preset_names()) {
        auto cfgs = preset_configs(name);
        REQUIRE(!cfgs.empty());
        for (auto& [subdir, cfg] : cfgs) CHECK_NOTHROW(validate(cfg));
    }
    CHECK(preset_configs("fig3").size() == 3);
    CHECK(preset_configs("fig5").size() == 3);
    CHECK_THROWS_AS(preset_configs("fig9"), ConfigError);
}

TEST_SUITE_END();
