#include <cmath>
#include <numbers>

#include "doctest.h"

#include "bhlab/error.hpp"
#include "bhlab/evolve.hpp"
#include "bhlab/initdata.hpp"
#include "bhlab/numerics.hpp"

using namespace bhlab;
constexpr double pi = std::numbers::pi;

namespace {

const Grid1D kGrid = Grid1D::make(-4.0, 4.0, 256);

double kmode(int j) { return 2 * pi * j / 8.0; }

EvolveConfig linear(double c, bool hilbert) {
    EvolveConfig cfg;
    cfg.model = EquationModel::LinearAdvection;
    cfg.advection_speed = c;
    cfg.hilbert_enabled = hilbert;
    return cfg;
}

Field run_fixed(const Field& u0, const EvolveConfig& cfg, double t_end, int steps) {
    Solver s(u0, 0.0, cfg);
    for (int i = 0; i < steps; ++i) s.advance(t_end / steps);
    return s.field();
}

double max_diff(const Field& a, const Field& b) { return max_abs(axpy(-1.0, a, b)); }

// inviscid Burgers by characteristics: u = u0(x - u t), Newton on the foot point
double burgers_exact(double x, double t, double A) {
    double y = x;
    for (int it = 0; it < 100; ++it) {
        const double g = y + A * std::sin(kmode(1) * y) * t - x;
        const double dg = 1.0 + A * kmode(1) * std::cos(kmode(1) * y) * t;
        const double dy = g / dg;
        y -= dy;
        if (std::abs(dy) < 1e-15) break;
    }
    return A * std::sin(kmode(1) * y);
}

}  // namespace

TEST_CASE("linear advection translates") {
    const auto f = [](double x) { return std::sin(kmode(2) * x) + 0.3 * std::cos(kmode(5) * x); };
    const Field u0 = Field::sample(kGrid, f);
    const double c = 0.7, T = 1.3;
    const Field u = run_fixed(u0, linear(c, false), T, 400);
    const Field exact = Field::sample(kGrid, [&](double x) { return f(x - c * T); });
    CHECK(max_diff(u, exact) < 1e-9);
}

TEST_CASE("the Hilbert term adds the dispersive phase speed 1/k") {
    // e^{ikx} -> e^{-i(ck + sgn k)t}: each mode moves at c + 1/k
    const Field u0 = Field::sample(kGrid, [](double x) { return std::sin(kmode(3) * x); });
    const double c = 0.4, T = 2.0;
    const Field u = run_fixed(u0, linear(c, true), T, 800);
    const Field exact = Field::sample(kGrid, [&](double x) { return std::sin(kmode(3) * (x - (c + 1.0 / kmode(3)) * T)); });
    CHECK(max_diff(u, exact) < 1e-9);
}

TEST_CASE("inviscid Burgers matches characteristics before breaking") {
    const double A = 0.5, T = 1.0;  // breaking at 1/(A pi/4) ~ 2.55
    const Grid1D g = Grid1D::make(-4.0, 4.0, 512);
    const Field u0 = Field::sample(g, [&](double x) { return A * std::sin(kmode(1) * x); });
    EvolveConfig cfg;
    cfg.hilbert_enabled = false;
    const Field u = run_fixed(u0, cfg, T, 1000);
    const Field exact = Field::sample(g, [&](double x) { return burgers_exact(x, T, A); });
    CHECK(max_diff(u, exact) < 1e-10);
}

TEST_CASE("RK4 converges at fourth order in time") {
    const Field u0 = Field::sample(kGrid, [](double x) { return std::exp(std::sin(kmode(1) * x)) - 1.2; });
    EvolveConfig cfg;  // full Burgers-Hilbert
    const double T = 0.5;
    const Field ref = run_fixed(u0, cfg, T, 2560);
    const double e1 = max_diff(run_fixed(u0, cfg, T, 80), ref);
    const double e2 = max_diff(run_fixed(u0, cfg, T, 160), ref);
    CHECK(std::log2(e1 / e2) == doctest::Approx(4.0).epsilon(0.05));
}

TEST_CASE("L2 norm is conserved by the dealiased Burgers-Hilbert flow") {
    InitConfig ic;
    // production resolution; RK4's energy error grows like dt^5 per unit time
    const Field u0 = build_initial_physical(ic, Grid1D::make(-4.0, 4.0, 16384));
    EvolveConfig cfg;
    Solver s(u0, -ic.epsilon, cfg);
    const double l0 = s.l2_norm();
    CHECK(l0 == doctest::Approx(l2_norm(u0)).epsilon(1e-12));
    for (int i = 0; i < 300; ++i) s.step();
    CHECK(std::abs(s.l2_norm() - l0) < 1e-10 * l0);
}

TEST_CASE("solver tangents are the derivative of the discrete map") {
    const Field u0 = Field::sample(kGrid, [](double x) { return 0.8 * std::sin(kmode(1) * x) + 0.1; });
    const Field v0 = Field::sample(kGrid, [](double x) { return std::cos(kmode(2) * x) * std::exp(-x * x); });
    EvolveConfig cfg;
    const double h = 1e-5;
    auto flow = [&](const Field& u) {
        Solver s(u, 0.0, cfg);
        for (int i = 0; i < 20; ++i) s.advance(0.01);
        return s.field();
    };
    Solver s(u0, 0.0, cfg, {v0});
    for (int i = 0; i < 20; ++i) s.advance(0.01);
    const Field fd = axpy(-1.0, flow(axpy(-h, v0, u0)), flow(axpy(h, v0, u0)));
    const Field tan = s.tangent(0);
    double err = 0;
    for (std::size_t k = 0; k < kGrid.n_points; ++k) err = std::max(err, std::abs(fd[k] / (2 * h) - tan[k]));
    CHECK(err < 1e-8 * max_abs(tan));

    // the field-level tangent step agrees with the solver
    TangentPair p{u0, v0, v0};
    const TangentPair p1 = step_tangent(p, 0.01, cfg);
    Solver s1(u0, 0.0, cfg, {v0});
    s1.advance(0.01);
    CHECK(max_diff(p1.u, s1.field()) < 1e-14);
    CHECK(max_diff(p1.v_alpha, s1.tangent(0)) < 1e-14);
    CHECK(max_diff(step(u0, 0.01, cfg), s1.field()) < 1e-14);
}

TEST_CASE("tangents are linear in the seed") {
    const Field u0 = Field::sample(kGrid, [](double x) { return 0.5 * std::sin(kmode(1) * x); });
    const Field a = Field::sample(kGrid, [](double x) { return std::cos(kmode(3) * x); });
    const Field b = Field::sample(kGrid, [](double x) { return std::sin(kmode(2) * x); });
    EvolveConfig cfg;
    Solver s(u0, 0.0, cfg, {a, b, axpy(2.0, a, b)});
    for (int i = 0; i < 10; ++i) s.step();
    CHECK(max_diff(s.tangent(2), axpy(2.0, s.tangent(0), s.tangent(1))) < 1e-12);
}

TEST_CASE("CFL violations are reported") {
    const Field u0 = Field::sample(kGrid, [](double x) { return 3.0 * std::sin(kmode(1) * x); });
    EvolveConfig cfg;
    Solver s(u0, 0.0, cfg);
    CHECK(s.dt() * 3.0 <= cfg.cfl * kGrid.spacing() * (1 + 1e-12));
    try {
        s.advance(0.5);
        FAIL("expected a CFL violation");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::CflViolation);
    }
    CHECK_THROWS_AS(s.advance(-1.0), Error);
}

TEST_CASE("refinement is an exact zero-padding") {
    const Field u0 = Field::sample(kGrid, [](double x) { return std::exp(-x * x); });
    EvolveConfig cfg;
    Solver s(u0, 0.0, cfg, {u0});
    const Field before = s.field();
    s.refine();
    CHECK(s.grid().n_points == 2 * kGrid.n_points);
    CHECK(s.refinement_times().size() == 1);
    const Field after = s.field();
    for (std::size_t k = 0; k < kGrid.n_points; ++k) CHECK(after[2 * k] == doctest::Approx(before[k]).epsilon(1e-13).scale(1.0));
    CHECK(s.l2_norm() == doctest::Approx(l2_norm(before)).epsilon(1e-13));
    CHECK(s.tangent(0).grid() == s.grid());
}

TEST_CASE("inviscid run of the canonical datum blows up at the predicted point") {
    InitConfig ic;
    const Field u0 = build_initial_physical(ic, Grid1D::make(-4.0, 4.0, 4096));
    EvolveConfig cfg;
    cfg.hilbert_enabled = false;
    cfg.stop_slope = 60.0;
    cfg.max_points = std::size_t{1} << 16;
    cfg.frame_ds = 0.0;
    cfg.snapshot_ds = 0.0;
    const Trajectory tr = run(u0, -ic.epsilon, cfg);
    CHECK(tr.stop == StopReason::StopSlope);
    REQUIRE(tr.records.size() > 10);
    for (std::size_t i = 1; i < tr.records.size(); ++i) CHECK(tr.records[i].s > tr.records[i - 1].s);
    const auto& last = tr.records.back();
    // U_2 is an exact self-similar solution of inviscid Burgers: tau = xi = 0, kappa = kappa0
    CHECK(std::abs(last.mod.tau) < 1e-8);
    CHECK(std::abs(last.mod.xi) < 1e-8);
    CHECK(last.mod.kappa == doctest::Approx(ic.kappa0).epsilon(1e-10).scale(1.0));
    CHECK(last.jet[5] == doctest::Approx(120.0).epsilon(1e-3));
    CHECK(last.max_slope >= 60.0);
    CHECK(tr.refine_times.size() >= 2);
    CHECK(tr.l2_initial > 0);
    CHECK(std::abs(last.l2 - tr.l2_initial) < 1e-10 * tr.l2_initial);
}

TEST_CASE("stop reasons") {
    CHECK(to_string(StopReason::StopSlope) == "stop_slope");
    const Field u0 = Field::sample(kGrid, [](double x) { return 0.1 * std::sin(kmode(1) * x); });
    EvolveConfig cfg = linear(0.5, false);
    cfg.extract = false;
    cfg.t_max = 0.2;
    const Trajectory tr = run(u0, 0.0, cfg);
    CHECK(tr.stop == StopReason::TMax);
    CHECK(tr.final_field.meta().time == doctest::Approx(0.2).epsilon(1e-12));
}
