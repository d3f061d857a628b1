#include <cmath>
#include <random>

#include "doctest.h"

#include "bhlab/error.hpp"
#include "bhlab/numerics.hpp"
#include "bhlab/profile.hpp"
#include "bhlab/selfsim.hpp"

using namespace bhlab;

namespace {

// theta^(5/4) ~ 0.024 against dx ~ 5e-4: the profile's complex singularity (|X| ~ 0.5) is well resolved
const Grid1D kPhys = Grid1D::make(-4.0, 4.0, 16384);

// kappa + theta^(1/4) U2((x - xi)/theta^(5/4)), cut off smoothly at |x - xi| in [1, 2]
Field windowed_profile(double theta, double xi, double kappa) {
    return Field::sample(kPhys, [&](double x) {
        const double y = x - xi;
        return kappa + smooth_window(y, 1.0, 2.0) * std::pow(theta, 0.25) * ui_eval(y / std::pow(theta, 1.25), 2);
    });
}

template <class F>
ErrorCode code_of(F&& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.code();
    }
    return ErrorCode::IoError;  // sentinel: nothing thrown
}

// d^n_X (W U_X)(0) by Leibniz, W^(k)(0) = (J_k + shift [k == 0]) / (1 - tau_dot)
double advective_derivative(const Jet& J, double shift, double tau_dot, int n) {
    double sum = 0, binom = 1;
    for (int k = 0; k <= n; ++k) {
        const double Wk = (J[k] + (k == 0 ? shift : 0.0)) / (1.0 - tau_dot);
        sum += binom * Wk * J[n - k + 1];
        binom = binom * (n - k) / (k + 1);
    }
    return sum;
}

}  // namespace

TEST_CASE("frame scaling per family") {
    const FrameScaling f2 = FrameScaling::for_family(2);
    CHECK(f2.a == 0.25);
    CHECK(f2.b == 1.25);
    CHECK(f2.constraint_order == 4);
    const FrameScaling f1 = FrameScaling::for_family(1);
    CHECK(f1.a == 0.5);
    CHECK(f1.constraint_order == 2);
    CHECK(f2.jet_exponent(5) == 6.0);
    CHECK_THROWS_AS(FrameScaling::for_family(0), Error);
}

TEST_CASE("extraction recovers the modulation of an exact profile") {
    const double theta = 0.05, xi = 0.3, kappa = 0.2, t = -0.7;
    const Field u = windowed_profile(theta, xi, kappa);
    const auto c = forward_normalized(u.values().data(), kPhys.n_points);
    for (std::optional<double> hint : {std::optional<double>{}, std::optional<double>{0.3005}}) {
        const Extraction ex = extract_from_spectrum(c, kPhys, t, hint);
        CHECK_FALSE(ex.used_fallback);
        CHECK(ex.mod.xi == doctest::Approx(xi).epsilon(1e-10));
        CHECK(ex.mod.tau - t == doctest::Approx(theta).epsilon(1e-9));
        // the smooth_step window is only finitely smooth; its spectral tail costs ~1e-9 here
        CHECK(std::abs(ex.mod.kappa - kappa) < 1e-8);
        CHECK(ex.s == doctest::Approx(-std::log(theta)).epsilon(1e-9));
        CHECK(ex.jet[1] == -1.0);
        CHECK(std::abs(ex.jet[2]) < 1e-7);
        CHECK(std::abs(ex.jet[3]) < 1e-6);
        CHECK(std::abs(ex.jet[4]) < 1e-6);
        CHECK(ex.jet[5] == doctest::Approx(120.0).epsilon(1e-4));
    }
    const ModulationState m = extract_modulation(u, t, std::nullopt);
    CHECK(m.theta() == doctest::Approx(theta).epsilon(1e-9));
}

TEST_CASE("extraction fails on increasing data") {
    const Field u = Field::sample(kPhys, [](double x) { return std::sin(std::numbers::pi * x / 4.0) * 0.01; });
    // the constraint root sits where u_x > 0 or nowhere near the seed
    CHECK_THROWS_AS(extract_modulation(u, 0.0, ModulationState{0, 1, 0.0, 0}), Error);
}

TEST_CASE("modulation rates keep J0, J1 and J4 stationary") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> ud(-1.0, 1.0);
    for (int trial = 0; trial < 20; ++trial) {
        Jet J{}, H{};
        J[0] = 0.0;
        J[1] = -1.0;
        J[2] = 0.05 * ud(rng);
        J[3] = 0.05 * ud(rng);
        J[4] = 0.0;
        J[5] = 120.0 + 5.0 * ud(rng);
        for (int n = 6; n <= kMaxDerivativeOrder; ++n) J[n] = 10.0 * ud(rng);
        for (auto& h : H) h = ud(rng);
        const double s = 2.0 + 3.0 * (trial / 20.0), kappa = 0.1 * ud(rng);
        const ModulationRates r = modulation_rhs(J, H, s, kappa);
        CAPTURE(trial);
        CHECK(r.shift == doctest::Approx(std::exp(0.25 * s) * (kappa - r.xi_dot)).epsilon(1e-12));
        const double inv = 1.0 / (1.0 - r.tau_dot), es = std::exp(-s);
        // d_s J_n = (a - n b) J_n - d^n(W U_X)(0) - [n == 0] e^{-3s/4} kappa_dot/(1 - tau_dot) + e^{-s} H_n/(1 - tau_dot)
        auto dJ = [&](int n) {
            return (0.25 - 1.25 * n) * J[n] - advective_derivative(J, r.shift, r.tau_dot, n) -
                   (n == 0 ? std::exp(-0.75 * s) * r.kappa_dot * inv : 0.0) + es * H[n] * inv;
        };
        CHECK(std::abs(dJ(0)) < 1e-10);
        CHECK(std::abs(dJ(1)) < 1e-12);
        CHECK(std::abs(dJ(4)) < 1e-10);
    }
}

TEST_CASE("modulation rates need a nondegenerate fifth derivative") {
    Jet J{}, H{};
    J[1] = -1.0;
    J[5] = 3.0;
    CHECK(code_of([&] { modulation_rhs(J, H, 3.0, 0.0); }) == ErrorCode::SmallFifthDerivative);
}

TEST_CASE("self-similar frame and its inverse map") {
    const double theta = 0.05;
    const Field u = windowed_profile(theta, 0.0, 0.1);
    ModulationState mod{-theta, 0.0, 0.0, 0.1};
    const SelfSimilarFrame fr = to_selfsimilar(u, mod.t, mod, Grid1D::make(-8.0, 8.0, 256));
    CHECK(fr.s == doctest::Approx(-std::log(theta)));
    for (std::size_t k = 0; k < fr.U.grid().n_points; k += 7) {
        const double X = fr.U.grid().x(k);
        CHECK(fr.U[k] == doctest::Approx(ui_eval(X, 2)).epsilon(1e-10).scale(1.0));
        CHECK(fr.dU[k] == doctest::Approx(ui_derivatives(X, 2, 1)[0]).epsilon(1e-8).scale(1.0));
    }
    CHECK(fr.nu_estimate == doctest::Approx(120.0).epsilon(1e-4));
    for (double x : {-0.05, 0.0, 0.013, 0.08}) CHECK(from_selfsimilar(fr, x) == doctest::Approx(0.1 + std::pow(theta, 0.25) * ui_eval(x / std::pow(theta, 1.25), 2)).epsilon(1e-8));
    CHECK(code_of([&] { from_selfsimilar(fr, 1.0); }) == ErrorCode::PointOutsideGrid);
    CHECK(code_of([&] { to_selfsimilar(u, 0.0, mod, Grid1D::make(-8.0, 8.0, 256)); }) == ErrorCode::InvalidArgument);
    CHECK(code_of([&] { to_selfsimilar(u, mod.t, mod, Grid1D::make(-400.0, 400.0, 256)); }) ==
          ErrorCode::PointOutsideGrid);
}

TEST_CASE("transport speed formula") {
    const double theta = 0.05;
    const Field u = windowed_profile(theta, 0.0, 0.0);
    ModulationState mod{-theta, 0.0, 0.0, 0.3};
    mod.xi_dot = 0.1;
    mod.tau_dot = 0.2;
    const SelfSimilarFrame fr = to_selfsimilar(u, mod.t, mod, Grid1D::make(-8.0, 8.0, 64));
    const Field V = transport_speed(fr, mod);
    const double shift = std::pow(theta, -0.25) * (0.3 - 0.1);
    for (std::size_t k = 0; k < 64; ++k)
        CHECK(V[k] == doctest::Approx((fr.U[k] + shift) / 0.8 + 1.25 * fr.U.grid().x(k)).epsilon(1e-14));
    mod.tau_dot = 1.0;
    CHECK(code_of([&] { transport_speed(fr, mod); }) == ErrorCode::TauDotGeOne);
}

TEST_CASE("lagrangian flow under pure dilation") {
    const auto V = [](double X, double) { return std::abs(X) > 50.0 ? std::nan("") : 1.25 * X; };
    const auto path = lagrangian_flow(0.3, 2.0, 4.0, V);
    CHECK(path.front().X == 0.3);
    CHECK(path.back().s == doctest::Approx(4.0).epsilon(1e-15));
    CHECK(path.back().X == doctest::Approx(0.3 * std::exp(1.25 * 2.0)).epsilon(1e-8));  // RK4, h = 0.01
    CHECK(code_of([&] { lagrangian_flow(10.0, 0.0, 5.0, V); }) == ErrorCode::LeftDomain);
    CHECK_THROWS_AS(lagrangian_flow(0.0, 1.0, 0.5, V), Error);
}

TEST_CASE("frame speed provider interpolates between frames") {
    ModulationState m1{-0.05, 0.0, 0.0, 0.0}, m2{-0.04, 0.0, 0.0, 0.0};
    const Grid1D Xg = Grid1D::make(-8.0, 8.0, 128);
    std::vector<SelfSimilarFrame> frames{to_selfsimilar(windowed_profile(0.05, 0, 0), m1.t, m1, Xg),
                                         to_selfsimilar(windowed_profile(0.04, 0, 0), m2.t, m2, Xg)};
    const SpeedProvider sp = frame_speed_provider(frames);
    // both frames carry the same steady profile, so V = U2(X) + 5X/4 at every s in between
    const double smid = 0.5 * (frames[0].s + frames[1].s);
    // 12-point Lagrange at dX = 1/8
    CHECK(std::abs(sp(0.7, smid) - ui_eval(0.7, 2) - 1.25 * 0.7) < 2e-6);
    CHECK(std::isnan(sp(0.7, frames[1].s + 0.1)));
    CHECK(std::isnan(sp(9.0, smid)));
}

TEST_CASE("ansatz residual vanishes on the exact inviscid blowup") {
    // theta^(1/4) U2(x / theta^(5/4)) with tau = xi = kappa = 0 solves u_t + u u_x = 0
    const Grid1D Xg = Grid1D::make(-6.0, 6.0, 256);
    const double th_a = 0.05, th_b = 0.05 * std::exp(-0.01);
    ModulationState ma{-th_a, 0, 0, 0}, mb{-th_b, 0, 0, 0};
    const SelfSimilarFrame a = to_selfsimilar(windowed_profile(th_a, 0, 0), ma.t, ma, Xg);
    const SelfSimilarFrame b = to_selfsimilar(windowed_profile(th_b, 0, 0), mb.t, mb, Xg);
    const Field r = selfsimilar_residual(a, b, false);
    CHECK(max_abs(r) < 1e-7);
    CHECK(r.meta().time == doctest::Approx(0.5 * (a.s + b.s)));
    // a wrong speed is visible
    SelfSimilarFrame bad = b;
    bad.mod.xi_dot = -0.01;
    CHECK(max_abs(selfsimilar_residual(a, bad, false)) > 1e-3);
    CHECK(code_of([&] { selfsimilar_residual(b, a, false); }) == ErrorCode::FramesMisaligned);
}

TEST_CASE("lagrange window interpolation") {
    const Grid1D g = Grid1D::make(0.0, 1.0, 64);
    std::vector<double> v(64);
    for (std::size_t k = 0; k < 64; ++k) v[k] = std::cos(3 * g.x(k));
    CHECK(lagrange_window(v, g, 0.4321) == doctest::Approx(std::cos(3 * 0.4321)).epsilon(1e-13));
    CHECK(lagrange_window(v, g, 0.001) == doctest::Approx(std::cos(0.003)).epsilon(1e-12));
    CHECK(lagrange_window(v, g, g.x(10)) == v[10]);
    CHECK(code_of([&] { lagrange_window(v, g, 1.5); }) == ErrorCode::PointOutsideGrid);
}
