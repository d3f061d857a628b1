#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>

#include "doctest.h"

#include "bhlab/config.hpp"
#include "bhlab/error.hpp"

using namespace bhlab;

namespace {

ErrorCode code_of(const std::function<void()>& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.code();
    }
    return ErrorCode::IoError;
}

std::string message_of(const std::function<void()>& f) {
    try {
        f();
    } catch (const std::exception& e) {
        return e.what();
    }
    return {};
}

}  // namespace

TEST_CASE("sectioned text with comments and dotted keys") {
    RunConfig c;
    parse_config_text(c, R"(# top level
seed = 7
evolve.cfl = 0.3

[init]
epsilon = 0.05   # trailing comment
chi = smoothstep
[hilbert]
kind = padded
pad_factor = 8
[diagnostics]
families = near, L2_dU
)");
    CHECK(c.seed == 7);
    CHECK(c.evolve.cfl == 0.3);
    CHECK(c.init.epsilon == 0.05);
    CHECK(c.init.chi == ChiTransition::QuinticSmoothstep);
    CHECK(c.evolve.hilbert.kind == HilbertKind::PaddedLine);
    CHECK(c.evolve.hilbert.pad_factor == 8);
    CHECK(c.diagnostics.bootstrap.families == std::vector<std::string>{"near", "L2_dU"});
    CHECK(c.is_set("init.epsilon"));
    CHECK_FALSE(c.is_set("evolve.stop_slope"));
}

TEST_CASE("errors name the key and the line") {
    RunConfig c;
    CHECK(code_of([&] { set_config_value(c, "evolve.bogus", "1"); }) == ErrorCode::ConfigError);
    CHECK(message_of([&] { set_config_value(c, "evolve.bogus", "1"); }).find("evolve.bogus") != std::string::npos);
    CHECK(message_of([&] { set_config_value(c, "evolve.cfl", "fast"); }).find("evolve.cfl") != std::string::npos);
    CHECK(code_of([&] { set_config_value(c, "diagnostics.families", "near,nowhere"); }) == ErrorCode::ConfigError);
    const std::string m = message_of([&] { parse_config_text(c, "[grid]\nn_points = 1000x\n", "run.cfg"); });
    CHECK(m.find("run.cfg:2") != std::string::npos);
    CHECK(code_of([&] { parse_config_text(c, "[grid\n"); }) == ErrorCode::ConfigError);
}

TEST_CASE("JSON config, nesting and nulls") {
    RunConfig c;
    parse_config_json(c, nlohmann::json::parse(R"({"seed": 3, "evolve": {"stop_slope": 800, "t_max": null},
                                                   "shoot": {"jacobian_mode": "both"}})"));
    CHECK(c.seed == 3);
    CHECK(c.evolve.stop_slope == 800.0);
    CHECK(c.evolve.t_max == EvolveConfig{}.t_max);
    CHECK(c.shoot.jacobian_mode == JacobianMode::Both);
    CHECK(code_of([&] { parse_config_json(c, nlohmann::json::parse(R"({"evolve": {"nope": 1}})")); }) ==
          ErrorCode::ConfigError);
}

TEST_CASE("file loading picks the format") {
    const auto dir = std::filesystem::temp_directory_path();
    const auto txt = (dir / "bhlab_cfg_test.cfg").string(), js = (dir / "bhlab_cfg_test.json").string();
    std::ofstream(txt) << "[evolve]\nstop_slope = 123\n";
    std::ofstream(js) << "  {\"evolve\": {\"stop_slope\": 321}}";
    RunConfig a, b;
    load_config_file(a, txt);
    load_config_file(b, js);
    CHECK(a.evolve.stop_slope == 123.0);
    CHECK(b.evolve.stop_slope == 321.0);
    std::filesystem::remove(txt);
    std::filesystem::remove(js);
    CHECK_THROWS_AS(load_config_file(a, (dir / "bhlab_missing.cfg").string()), Error);
}

TEST_CASE("environment overrides") {
    RunConfig c;
    std::string e1 = "BHLAB_EVOLVE_STOP_SLOPE=900", e2 = "BHLAB_SEED=11", e3 = "HOME=/root",
                e4 = "BHLAB_INIT_C_ALPHA=2.5";
    char* env[] = {e1.data(), e2.data(), e3.data(), e4.data(), nullptr};
    apply_env_overrides(c, env);
    CHECK(c.evolve.stop_slope == 900.0);
    CHECK(c.seed == 11);
    CHECK(c.init.c_alpha == 2.5);
    std::string bad = "BHLAB_EVOLVE_WARP=1";
    char* env2[] = {bad.data(), nullptr};
    CHECK(message_of([&] { apply_env_overrides(c, env2); }).find("BHLAB_EVOLVE_WARP") != std::string::npos);
}

TEST_CASE("resolve fills dependent defaults and validates") {
    RunConfig c;
    set_config_value(c, "init.epsilon", "0.2");
    c.resolve();
    CHECK(c.grid.t0 == -0.2);
    CHECK(c.evolve.stop_slope == doctest::Approx(250.0));
    CHECK(c.shoot.epsilon == 0.2);
    CHECK(c.shoot.n_points == c.grid.n_points);

    RunConfig d;
    set_config_value(d, "evolve.stop_slope", "42");
    set_config_value(d, "grid.t0", "-0.5");
    d.resolve();
    CHECK(d.evolve.stop_slope == 42.0);
    CHECK(d.grid.t0 == -0.5);

    RunConfig bad;
    set_config_value(bad, "grid.n_points", "1000");
    CHECK(message_of([&] { bad.resolve(); }).find("grid.n_points") != std::string::npos);
}

TEST_CASE("every key round trips through JSON") {
    RunConfig c;
    set_config_value(c, "evolve.cfl", "0.35");
    set_config_value(c, "shoot.n_checkpoints", "5");
    set_config_value(c, "diagnostics.window_lo", "2.5");
    set_config_value(c, "diagnostics.window_hi", "4.5");
    set_config_value(c, "evolve.t_max", "inf");  // JSON has no infinity
    c.resolve();
    const nlohmann::json j = to_json(c);
    for (const auto& k : config_keys()) {
        CAPTURE(k);
        const auto dot = k.find('.');
        if (dot == std::string::npos)
            CHECK(j.contains(k));
        else
            CHECK(j.at(k.substr(0, dot)).contains(k.substr(dot + 1)));
    }
    RunConfig r;
    parse_config_json(r, j);
    r.resolve();
    CHECK(to_json(r) == j);
    CHECK(std::isinf(r.evolve.t_max));
    RunConfig from_dump;
    parse_config_json(from_dump, nlohmann::json::parse(j.dump()));
    CHECK(std::isinf(from_dump.evolve.t_max));
}
