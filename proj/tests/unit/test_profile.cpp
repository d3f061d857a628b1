#include <cmath>
#include <vector>

#include "doctest.h"

#include "bhlab/error.hpp"
#include "bhlab/profile.hpp"

using namespace bhlab;

namespace {

// Cardano root of U^3 + U + X = 0 (one real root): independent oracle for U_1.
// The two cube roots multiply to -1/3, which avoids the cancellation at large |X|.
double cardano_u1(double X) {
    const double q = std::abs(X) / 2.0;
    const double m = std::cbrt(q + std::sqrt(q * q + 1.0 / 27.0));
    return -std::copysign(m - 1.0 / (3.0 * m), X);
}

// sixth-order central difference of ui_eval
double fd_derivative(double X, int i, double h) {
    auto f = [&](double x) { return ui_eval(x, i); };
    return (f(X + 3 * h) - 9 * f(X + 2 * h) + 45 * f(X + h) - 45 * f(X - h) + 9 * f(X - 2 * h) - f(X - 3 * h)) /
           (60 * h);
}

}  // namespace

TEST_CASE("U2 solves the implicit equation") {
    for (double X : {-1e6, -34.0, -2.0, -0.3, 0.0, 1e-8, 0.7, 5.0, 1e3, 1e6}) {
        const double U = ui_eval(X, 2);
        CHECK(std::abs(X + U + std::pow(U, 5)) <= 1e-12 * (1 + std::abs(X)));
    }
}

TEST_CASE("U2 closed-form points") {
    CHECK(ui_eval(-2.0, 2) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(ui_eval(34.0, 2) == doctest::Approx(-2.0).epsilon(1e-15));
    CHECK(ui_eval(0.0, 2) == 0.0);
}

TEST_CASE("U2 derivatives at the origin") {
    const auto d = ui_derivatives(0.0, 2, 9);
    const std::vector<double> expect{-1, 0, 0, 0, 120, 0, 0, 0, -5.0 * 362880.0};  // U = -X + X^5 - 5X^9 + ...
    for (int k = 0; k < 9; ++k) CHECK(d[k] == doctest::Approx(expect[k]).epsilon(1e-9));
}

TEST_CASE("U2 derivatives agree with finite differences") {
    for (double X : {-3.0, -0.4, 0.25, 1.7, 12.0}) {
        const auto d = ui_derivatives(X, 2, 1);
        CHECK(d[0] == doctest::Approx(fd_derivative(X, 2, 1e-3)).epsilon(1e-9));
    }
    // implicit differentiation: U' = -1/(1 + 5U^4)
    for (double X : {-7.0, 0.3, 40.0}) {
        const double U = ui_eval(X, 2);
        CHECK(ui_derivatives(X, 2, 1)[0] == doctest::Approx(-1.0 / (1.0 + 5.0 * std::pow(U, 4))).epsilon(1e-13));
    }
}

TEST_CASE("U1 matches Cardano") {
    for (double X : {-50.0, -1.0, -0.01, 0.0, 0.3, 2.0, 1e4}) {
        CHECK(ui_eval(X, 1) == doctest::Approx(cardano_u1(X)).epsilon(1e-13));
        const double U = cardano_u1(X);
        CHECK(ui_derivatives(X, 1, 1)[0] == doctest::Approx(-1.0 / (1.0 + 3.0 * U * U)).epsilon(1e-12));
    }
    const auto d = ui_derivatives(0.0, 1, 3);
    CHECK(d[0] == doctest::Approx(-1.0));
    CHECK(d[2] == doctest::Approx(6.0));  // U1 = -X + X^3 + ...
}

TEST_CASE("profile ODE residual vanishes") {
    for (int i = 1; i <= 3; ++i)
        for (double X : {-20.0, -1.0, 0.5, 3.0}) CHECK(std::abs(ui_ode_residual(X, i)) < 1e-12);
}

TEST_CASE("U2 is odd and decreasing") {
    double prev = ui_eval(-100.0, 2);
    for (double X = -99.0; X <= 100.0; X += 1.0) {
        const double U = ui_eval(X, 2);
        CHECK(U < prev);
        CHECK(ui_eval(-X, 2) == doctest::Approx(-U).epsilon(1e-14));
        prev = U;
    }
}

TEST_CASE("rescaled family carries nu as its fifth derivative") {
    for (double nu : {100.0, 120.0, 140.0}) {
        const auto d = u2_nu_derivatives(0.0, nu, 5);
        CHECK(d[0] == doctest::Approx(-1.0).epsilon(1e-12));
        CHECK(d[4] == doctest::Approx(nu).epsilon(1e-9));
    }
    CHECK(u2_nu_eval(0.8, 120.0) == doctest::Approx(ui_eval(0.8, 2)).epsilon(1e-14));
    CHECK_THROWS_AS(u2_nu_eval(0.1, -1.0), Error);
}

TEST_CASE("far-field asymptotics") {
    for (double X : {1e3, -1e4, 1e6}) CHECK(u2_asymptotic(X) == doctest::Approx(ui_eval(X, 2)).epsilon(1e-4));
}

TEST_CASE("bound certificates hold for U2") {
    std::vector<double> xs;
    for (int k = -60; k <= 60; ++k) xs.push_back(std::copysign(std::pow(10.0, std::abs(k) / 10.0 - 2.0), k));
    const BoundReport r = u2_bound_certificates(xs, 0.1);
    CHECK(r.all_passed());
    CHECK(r.checks.size() == 4);
}

TEST_CASE("invalid arguments") {
    CHECK_THROWS_AS(ui_derivatives(0.0, 2, 10), Error);
    CHECK_THROWS_AS(ui_eval(0.0, 0), Error);
    CHECK_THROWS_AS(ui_eval(std::nan(""), 2), Error);
}
