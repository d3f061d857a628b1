#include <cmath>

#include "doctest.h"

#include "bhlab/error.hpp"
#include "bhlab/initdata.hpp"
#include "bhlab/profile.hpp"
#include "bhlab/selfsim.hpp"

using namespace bhlab;

namespace {

PointJet origin_jet(const Field& f, double x0 = 0.0) {
    const auto c = forward_normalized(f.values().data(), f.grid().n_points);
    return eval_point(c, f.grid(), x0, 6);
}

// coarse enough that k^5-amplified rounding stays below the checked tolerances
const Grid1D kXGrid = Grid1D::make(-40.0, 40.0, 2048);
const Grid1D kPhys = Grid1D::make(-4.0, 4.0, 16384);

}  // namespace

TEST_CASE("chi: plateau, support, symmetry, monotone transition") {
    for (ChiTransition kind : {ChiTransition::QuinticSmoothstep, ChiTransition::MollifiedLinear, ChiTransition::Exponential}) {
        CAPTURE(to_string(kind));
        CHECK(chi_eval(0.5, kind) == 1.0);
        CHECK(chi_eval(-1.0, kind) == 1.0);
        CHECK(chi_eval(3.0, kind) == 0.0);
        CHECK(chi_eval(2.0, kind) == 0.0);
        CHECK(chi_eval(-1.5, kind) == chi_eval(1.5, kind));
        double prev = 1.0;
        for (double X = 1.0; X <= 2.0; X += 1e-3) {
            const double c = chi_eval(X, kind);
            CHECK(c <= prev + 1e-15);
            prev = c;
        }
    }
}

TEST_CASE("chi derivatives agree with finite differences") {
    const double h = 1e-4;
    for (ChiTransition kind : {ChiTransition::QuinticSmoothstep, ChiTransition::MollifiedLinear, ChiTransition::Exponential}) {
        CAPTURE(to_string(kind));
        for (double X : {1.1, 1.37, 1.5, 1.81, -1.6}) {
            const double fd1 = (chi_eval(X + h, kind) - chi_eval(X - h, kind)) / (2 * h);
            const double fd2 = (chi_eval(X + h, kind) - 2 * chi_eval(X, kind) + chi_eval(X - h, kind)) / (h * h);
            CHECK(chi_derivative(X, kind, 1) == doctest::Approx(fd1).epsilon(1e-6));
            CHECK(chi_derivative(X, kind, 2) == doctest::Approx(fd2).epsilon(1e-4).scale(1.0));
        }
    }
}

TEST_CASE("a unit-length flat-ended transition needs |chi''| >= 4") {
    // chi drops by 1 over [1,2] with zero slope at both ends, so sup|chi''| >= 4.
    for (ChiTransition kind : {ChiTransition::QuinticSmoothstep, ChiTransition::MollifiedLinear, ChiTransition::Exponential}) {
        double m = 0;
        for (double X = 1.0; X <= 2.0; X += 1e-4) m = std::max(m, std::abs(chi_derivative(X, kind, 2)));
        CHECK(m >= 4.0);
    }
}

TEST_CASE("self-similar datum origin jet") {
    InitConfig cfg;
    Field U = build_initial_selfsim(cfg, kXGrid);
    PointJet j = origin_jet(U);
    CHECK(std::abs(j.d[0]) < 1e-12);
    CHECK(j.d[1] == doctest::Approx(-1.0).epsilon(1e-10));
    CHECK(std::abs(j.d[2]) < 1e-9);
    CHECK(std::abs(j.d[3]) < 1e-9);
    CHECK(std::abs(j.d[4]) < 1e-7);
    CHECK(j.d[5] == doctest::Approx(120.0).epsilon(1e-7));

}

TEST_CASE("datum equals U2 + alpha X^2 + beta X^3 on the plateau of chi") {
    // chi = 1 on |X| <= 1, so the origin jet is affine in (alpha, beta) with
    // coefficients 2 and 6 exactly.
    InitConfig cfg;
    cfg.alpha = 0.03;
    cfg.beta = -0.02;
    const Field U = build_initial_selfsim(cfg, kXGrid);
    for (std::size_t k = 0; k < kXGrid.n_points; ++k) {
        const double X = kXGrid.x(k);
        if (std::abs(X) > 1.0) continue;
        CHECK(U[k] == doctest::Approx(ui_eval(X, 2) + cfg.alpha * X * X + cfg.beta * X * X * X).epsilon(1e-14));
    }
    CHECK(uhat_d2_origin(cfg) == 0.0);
    CHECK(uhat_d3_origin(cfg) == 0.0);
}

TEST_CASE("physical datum: value, slope and support") {
    InitConfig cfg;
    cfg.kappa0 = 0.05;
    cfg.alpha = 0.02;
    const Field u0 = build_initial_physical(cfg, kPhys);
    const PointJet j = origin_jet(u0);
    CHECK(j.d[0] == doctest::Approx(cfg.kappa0).epsilon(1e-10));
    CHECK(j.d[1] == doctest::Approx(-1.0 / cfg.epsilon).epsilon(1e-9));
    for (std::size_t k = 0; k < kPhys.n_points; ++k)
        if (std::abs(kPhys.x(k)) >= 1.0) CHECK(u0[k] == 0.0);
    const InitReport rep = validate_initial(cfg, u0);
    CHECK(rep.support_radius <= 1.0);
    CHECK(rep.find("origin_slope")->passed);
    CHECK_THROWS_AS(build_initial_physical(cfg, Grid1D::make(-1.5, 1.5, 1024)), Error);
    CHECK_THROWS_AS(build_initial_selfsim(cfg, Grid1D::make(-5.0, 5.0, 1024)), Error);
}

TEST_CASE("validation report on the canonical datum") {
    InitConfig cfg;
    const Field u0 = build_initial_physical(cfg, kPhys);
    const InitReport rep = validate_initial(cfg, u0);
    CHECK(rep.all_passed());
    CHECK(rep.grad_l2 <= std::sqrt(6.0));
    CHECK(rep.find("uhat_origin_vanish")->value == 0.0);
    CHECK(rep.find("min_slope_at_origin")->passed);
}

TEST_CASE("parameter box is enforced by the report") {
    InitConfig cfg;
    cfg.alpha = 0.5;  // far outside |alpha| <= eps
    const InitReport rep = validate_initial(cfg, build_initial_physical(cfg, kPhys));
    CHECK_FALSE(rep.find("alpha_box")->passed);
}

TEST_CASE("tangent fields are the exact parameter derivatives") {
    InitConfig cfg;
    cfg.alpha = 0.01;
    cfg.beta = 0.002;
    const double h = 1e-3;
    InitConfig p = cfg, m = cfg;
    p.alpha += h;
    m.alpha -= h;
    const Field fd = axpy(-1.0, build_initial_physical(m, kPhys), build_initial_physical(p, kPhys));
    const Field ta = initial_tangent_alpha(cfg, kPhys);
    double err = 0;
    for (std::size_t k = 0; k < kPhys.n_points; ++k) err = std::max(err, std::abs(fd[k] / (2 * h) - ta[k]));
    CHECK(err < 1e-10 * std::max(1.0, max_abs(ta)));
    p = cfg;
    m = cfg;
    p.beta += h;
    m.beta -= h;
    const Field fdb = axpy(-1.0, build_initial_physical(m, kPhys), build_initial_physical(p, kPhys));
    const Field tb = initial_tangent_beta(cfg, kPhys);
    err = 0;
    for (std::size_t k = 0; k < kPhys.n_points; ++k) err = std::max(err, std::abs(fdb[k] / (2 * h) - tb[k]));
    CHECK(err < 1e-10 * std::max(1.0, max_abs(tb)));
}

TEST_CASE("physical and self-similar builders agree") {
    InitConfig cfg;
    cfg.alpha = 0.02;
    cfg.beta = -0.01;
    const Field u0 = build_initial_physical(cfg, kPhys);
    const Field U = build_initial_selfsim(cfg, kXGrid);
    ModulationState mod;
    mod.t = -cfg.epsilon;
    mod.tau = 0.0;
    mod.xi = 0.0;
    mod.kappa = cfg.kappa0;
    // frame nodes coincide with X-grid nodes 768.. (same spacing 80/2048)
    const SelfSimilarFrame fr = to_selfsimilar(u0, mod.t, mod, Grid1D::make(-10.0, 10.0, 512));
    double err = 0;
    for (std::size_t k = 0; k < fr.U.grid().n_points; ++k) {
        CHECK(fr.U.grid().x(k) == doctest::Approx(kXGrid.x(k + 768)));
        err = std::max(err, std::abs(fr.U[k] - U[k + 768]));
    }
    CHECK(err < 1e-9);
}

TEST_CASE("U1 control datum has its first higher derivative at order 3") {
    InitConfig cfg;
    cfg.family = 1;
    const PointJet j = origin_jet(build_initial_selfsim(cfg, kXGrid));
    CHECK(j.d[1] == doctest::Approx(-1.0).epsilon(1e-10));
    CHECK(std::abs(j.d[2]) < 1e-9);
    CHECK(j.d[3] == doctest::Approx(6.0).epsilon(1e-8));
}

TEST_CASE("names round trip") {
    CHECK(parse_chi_transition("exponential") == ChiTransition::Exponential);
    CHECK(parse_chi_transition("smoothstep") == ChiTransition::QuinticSmoothstep);
    CHECK(parse_uhat_family("bump") == UhatFamily::SmallBump);
    CHECK_THROWS_AS(parse_chi_transition("linear"), Error);
}
