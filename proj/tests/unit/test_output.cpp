#include <cstring>
#include <filesystem>

#include "doctest.h"

#include "bhlab/error.hpp"
#include "bhlab/initdata.hpp"
#include "bhlab/output.hpp"

using namespace bhlab;

namespace {

bool same_bits(double a, double b) { return std::memcmp(&a, &b, sizeof a) == 0; }

bool same_field(const Field& a, const Field& b) {
    if (!(a.grid() == b.grid())) return false;
    for (std::size_t k = 0; k < a.grid().n_points; ++k)
        if (!same_bits(a[k], b[k])) return false;
    return true;
}

}  // namespace

TEST_CASE("trajectory round trip is bit exact") {
    InitConfig ic;
    const Field u0 = build_initial_physical(ic, Grid1D::make(-4.0, 4.0, 4096));
    EvolveConfig cfg;
    cfg.stop_slope = 25.0;
    cfg.frame_ds = 0.1;
    cfg.frame_points = 64;
    cfg.snapshot_ds = 0.2;
    const Trajectory tr = run(u0, -ic.epsilon, cfg);
    REQUIRE(tr.frames.size() >= 2);
    REQUIRE(tr.snapshots.size() >= 2);

    const auto dir = (std::filesystem::temp_directory_path() / "bhlab_traj_rt").string();
    std::filesystem::remove_all(dir);
    write_trajectory(dir, tr);
    const Trajectory back = read_trajectory(dir);

    CHECK(back.stop == tr.stop);
    CHECK(same_bits(back.t0, tr.t0));
    CHECK(same_bits(back.l2_initial, tr.l2_initial));
    CHECK(same_bits(back.speed_bound, tr.speed_bound));
    CHECK(back.refine_times == tr.refine_times);
    REQUIRE(back.records.size() == tr.records.size());
    for (std::size_t i = 0; i < tr.records.size(); ++i) {
        const auto &a = tr.records[i], &b = back.records[i];
        CHECK(a.step == b.step);
        CHECK(a.n_points == b.n_points);
        CHECK(same_bits(a.t, b.t));
        CHECK(same_bits(a.mod.tau, b.mod.tau));
        CHECK(same_bits(a.mod.xi_dot, b.mod.xi_dot));
        CHECK(same_bits(a.s, b.s));
        for (int n = 0; n <= kMaxDerivativeOrder; ++n) {
            CHECK(same_bits(a.jet[n], b.jet[n]));
            CHECK(same_bits(a.hilbert[n], b.hilbert[n]));
        }
        CHECK(same_bits(a.max_slope, b.max_slope));
    }
    REQUIRE(back.frames.size() == tr.frames.size());
    for (std::size_t i = 0; i < tr.frames.size(); ++i) {
        CHECK(same_field(back.frames[i].U, tr.frames[i].U));
        CHECK(back.frames[i].dU == tr.frames[i].dU);
        CHECK(back.frames[i].HU == tr.frames[i].HU);
        CHECK(same_bits(back.frames[i].nu_estimate, tr.frames[i].nu_estimate));
    }
    REQUIRE(back.snapshots.size() == tr.snapshots.size());
    for (std::size_t i = 0; i < tr.snapshots.size(); ++i) CHECK(same_field(back.snapshots[i], tr.snapshots[i]));
    CHECK(back.snapshot_records == tr.snapshot_records);
    CHECK(same_field(back.final_field, tr.final_field));
    std::filesystem::remove_all(dir);
    CHECK_THROWS_AS(read_trajectory(dir), Error);
}

TEST_CASE("json helpers") {
    ModulationState m{0.1, 0.3, -0.2, 0.05};
    m.tau_dot = 0.01;
    const auto j = to_json(m);
    CHECK(j["tau"] == 0.3);
    CHECK(j["tau_dot"] == 0.01);

    ShootCheckpoint c;
    c.n = 2;
    c.jacobian = Mat2{{{1, 2}, {3, 4}}};
    auto jc = to_json(c);
    CHECK(jc["fd_disagreement"].is_null());
    c.fd_disagreement = 0.003;
    jc = to_json(c);
    CHECK(jc["fd_disagreement"] == 0.003);

    const auto path = (std::filesystem::temp_directory_path() / "bhlab_json_rt.json").string();
    write_json(path, jc);
    CHECK(read_json(path) == jc);
    std::filesystem::remove(path);
}
