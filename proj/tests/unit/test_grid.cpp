#include <cmath>
#include <filesystem>
#include <numbers>
#include <random>

#include "doctest.h"

#include "bhlab/error.hpp"
#include "bhlab/fft.hpp"
#include "bhlab/grid.hpp"
#include "bhlab/numerics.hpp"

using namespace bhlab;
constexpr double pi = std::numbers::pi;

TEST_CASE("grid geometry") {
    const Grid1D g = Grid1D::make(-2.0, 2.0, 16);
    CHECK(g.spacing() == doctest::Approx(0.25));
    CHECK(g.x(0) == -2.0);
    CHECK(g.x(15) == doctest::Approx(1.75));
    CHECK(g.wavenumber(1) == doctest::Approx(2 * pi / 4.0));
    CHECK_THROWS_AS(Grid1D::make(1.0, -1.0, 8), Error);
    CHECK_THROWS_AS(Grid1D::make(-1.0, 1.0, 24), Error);  // not a power of two
    CHECK_THROWS_AS(Grid1D::make(-1.0, 1.0, 8), Error);   // too small
    CHECK(is_power_of_two(1024));
    CHECK_FALSE(is_power_of_two(1000));
}

TEST_CASE("field rejects non-finite samples and mismatched sizes") {
    const Grid1D g = Grid1D::make(-1.0, 1.0, 16);
    std::vector<double> v(16, 0.0);
    v[3] = std::nan("");
    CHECK_THROWS_AS(Field(g, v), Error);
    CHECK_THROWS_AS(Field(g, std::vector<double>(15, 0.0)), Error);
}

TEST_CASE("fft round trip") {
    std::mt19937_64 rng(7);
    std::normal_distribution<double> nd;
    std::vector<double> v(256);
    for (auto& x : v) x = nd(rng);
    const auto c = forward_normalized(v.data(), v.size());
    const auto back = inverse_normalized(c, v.size());
    double err = 0;
    for (std::size_t k = 0; k < v.size(); ++k) err = std::max(err, std::abs(back[k] - v[k]));
    CHECK(err < 1e-13);
}

TEST_CASE("spectral derivative of trigonometric data is exact") {
    const Grid1D g = Grid1D::make(-pi, pi, 64);
    const Field f = Field::sample(g, [](double x) { return std::sin(3 * x) + 0.5 * std::cos(5 * x); });
    for (int order = 1; order <= 9; ++order) {
        const Field d = spectral_derivative(f, order);
        double err = 0;
        for (std::size_t k = 0; k < g.n_points; ++k) {
            const double x = g.x(k);
            // d^m sin(ax) = a^m sin(ax + m pi/2)
            const double exact = std::pow(3.0, order) * std::sin(3 * x + order * pi / 2) +
                                 0.5 * std::pow(5.0, order) * std::cos(5 * x + order * pi / 2);
            err = std::max(err, std::abs(d[k] - exact) / std::pow(5.0, order));
        }
        // rounding is amplified by k_max^m = 32^m
        CHECK(err < 1e-14 * std::pow(32.0 / 5.0, order));
    }
    CHECK_THROWS_AS(spectral_derivative(f, 10), Error);
    CHECK_THROWS_AS(spectral_derivative(f, 0), Error);
}

TEST_CASE("spectral derivative is linear") {
    std::mt19937_64 rng(11);
    std::normal_distribution<double> nd;
    const Grid1D g = Grid1D::make(-1.0, 1.0, 128);
    std::vector<double> a(128), b(128);
    for (auto& x : a) x = nd(rng);
    for (auto& x : b) x = nd(rng);
    const Field fa(g, a), fb(g, b);
    const Field lhs = spectral_derivative(axpy(2.5, fa, fb), 3);
    const Field rhs = axpy(2.5, spectral_derivative(fa, 3), spectral_derivative(fb, 3));
    CHECK(max_abs(axpy(-1.0, lhs, rhs)) <= 1e-12 * max_abs(rhs));
}

TEST_CASE("point evaluation matches the band-limited function off grid") {
    const Grid1D g = Grid1D::make(0.0, 2 * pi, 32);
    const Field f = Field::sample(g, [](double x) { return std::cos(2 * x) + std::sin(x); });
    const auto c = forward_normalized(f.values().data(), g.n_points);
    const double x0 = 0.3711;
    const PointJet p = eval_point(c, g, x0, 4);
    CHECK(p.d[0] == doctest::Approx(std::cos(2 * x0) + std::sin(x0)).epsilon(1e-13));
    CHECK(p.d[1] == doctest::Approx(-2 * std::sin(2 * x0) + std::cos(x0)).epsilon(1e-12));
    CHECK(p.d[4] == doctest::Approx(16 * std::cos(2 * x0) + std::sin(x0)).epsilon(1e-12));
    // H[cos] = sin, H[sin] = -cos
    CHECK(p.h[0] == doctest::Approx(std::sin(2 * x0) - std::cos(x0)).epsilon(1e-12));
    const auto jet = local_jet(f, x0, 2);
    CHECK(jet[2] == doctest::Approx(-4 * std::cos(2 * x0) - std::sin(x0)).epsilon(1e-12));
}

TEST_CASE("dealias removes the top third") {
    const Grid1D g = Grid1D::make(0.0, 2 * pi, 32);
    const Field f = Field::sample(g, [](double x) { return std::sin(2 * x) + std::sin(14 * x); });
    const Field d = dealias(f);
    double err = 0;
    for (std::size_t k = 0; k < g.n_points; ++k) err = std::max(err, std::abs(d[k] - std::sin(2 * g.x(k))));
    CHECK(err < 1e-13);
}

TEST_CASE("field csv round trip") {
    const Grid1D g = Grid1D::make(-1.0, 1.0, 16);
    const Field f = Field::sample(g, [](double x) { return std::exp(x) / 3.0; }, {"u", 0.25});
    const auto path = (std::filesystem::temp_directory_path() / "bhlab_field_rt.csv").string();
    write_field_csv(path, f);
    const Field r = read_field_csv(path);
    CHECK(r.grid() == g);
    CHECK(r.meta().time == 0.25);
    for (std::size_t k = 0; k < g.n_points; ++k) CHECK(r[k] == f[k]);
    std::filesystem::remove(path);
}

TEST_CASE("gauss-legendre is exact for polynomials of degree 2n-1") {
    // int_{-1}^{2} x^15 dx = (2^16 - 1)/16
    const double v = integrate_gl([](double x) { return std::pow(x, 15); }, -1.0, 2.0, 1, 8);
    CHECK(v == doctest::Approx((65536.0 - 1.0) / 16.0).epsilon(1e-13));
}

TEST_CASE("line fit recovers exact slopes") {
    std::vector<double> x, y;
    for (int k = 0; k < 10; ++k) {
        x.push_back(k * 0.3);
        y.push_back(-0.75 * k * 0.3 + 2.0);
    }
    const LinearFit f = fit_line(x, y);
    CHECK(f.slope == doctest::Approx(-0.75).epsilon(1e-13));
    CHECK(f.intercept == doctest::Approx(2.0).epsilon(1e-13));
    CHECK(f.slope_stderr < 1e-12);
}

TEST_CASE("lagrange through nodes reproduces cubics") {
    const std::vector<double> t{0.0, 0.4, 1.1, 1.5};
    std::vector<double> v;
    for (double x : t) v.push_back(x * x * x - 2 * x + 1);
    CHECK(lagrange_eval(t, v, 0.77) == doctest::Approx(0.77 * 0.77 * 0.77 - 2 * 0.77 + 1).epsilon(1e-13));
    CHECK(lagrange_deriv(t, v, 0.77) == doctest::Approx(3 * 0.77 * 0.77 - 2).epsilon(1e-12));
}

TEST_CASE("smooth step and window") {
    CHECK(smooth_step(-0.1) == 0.0);
    CHECK(smooth_step(1.2) == 1.0);
    CHECK(smooth_step(0.5) == doctest::Approx(0.5));
    CHECK(smooth_window(0.5, 1.0, 2.0) == 1.0);
    CHECK(smooth_window(-2.5, 1.0, 2.0) == 0.0);
}
