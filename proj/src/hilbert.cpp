#include "bhlab/hilbert.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "bhlab/error.hpp"
#include "bhlab/numerics.hpp"

namespace bhlab {

HilbertKind parse_hilbert_kind(const std::string& name) {
    if (name == "spectral") return HilbertKind::SpectralPeriodic;
    if (name == "padded") return HilbertKind::PaddedLine;
    if (name == "pv") return HilbertKind::PrincipalValue;
    fail(ErrorCode::ConfigError, "unknown hilbert method '" + name + "' (spectral|padded|pv)");
}

std::string to_string(HilbertKind kind) {
    switch (kind) {
        case HilbertKind::SpectralPeriodic: return "spectral";
        case HilbertKind::PaddedLine: return "padded";
        case HilbertKind::PrincipalValue: return "pv";
    }
    return "?";
}

Field hilbert_spectral(const Field& f) {
    const auto& g = f.grid();
    const std::size_t n = g.n_points;
    ComplexVec c = forward_normalized(f.values().data(), n);
    c[0] = 0.0;
    c[n / 2] = 0.0;
    for (std::size_t j = 1; j < n / 2; ++j) c[j] *= cplx(0.0, -1.0);
    RealVec out = inverse_normalized(c, n);
    return Field(g, std::vector<double>(out.begin(), out.end()), {"H[" + f.meta().label + "]", f.meta().time});
}

bool support_indices(const Field& f, std::size_t& first, std::size_t& last, double rel_tol) {
    const double thr = rel_tol * max_abs(f);
    bool any = false;
    for (std::size_t k = 0; k < f.size(); ++k) {
        if (std::abs(f[k]) > thr && f[k] != 0.0) {
            if (!any) first = k;
            last = k;
            any = true;
        }
    }
    return any;
}

Field hilbert_padded_line(const Field& f, int pad_factor) {
    if (pad_factor < 2) fail(ErrorCode::InvalidArgument, "pad_factor must be >= 2");
    const auto& g = f.grid();
    const std::size_t n = g.n_points;
    const std::size_t np = n * static_cast<std::size_t>(pad_factor);
    const std::size_t offset = (np - n) / 2;

    std::size_t first = 0, last = 0;
    if (!support_indices(f, first, last)) return Field::zeros(g, {"H[" + f.meta().label + "]", f.meta().time});
    if (first + offset < np / 3 || last + offset > 2 * np / 3)
        fail(ErrorCode::SupportTooWide, "support reaches the outer third of the padded grid");

    const double h = g.spacing();
    Grid1D big = Grid1D::make(g.x_min - static_cast<double>(offset) * h,
                              g.x_min - static_cast<double>(offset) * h + static_cast<double>(np) * h, np);
    std::vector<double> v(np, 0.0);
    std::copy(f.values().begin(), f.values().end(), v.begin() + static_cast<long>(offset));
    Field hb = hilbert_spectral(Field(big, std::move(v)));
    std::vector<double> out(hb.values().begin() + static_cast<long>(offset),
                            hb.values().begin() + static_cast<long>(offset + n));
    return Field(g, std::move(out), {"H[" + f.meta().label + "]", f.meta().time});
}

double near_radius(double x, NearRadiusRule rule) {
    if (rule == NearRadiusRule::Unit) return 1.0;
    return std::min(1.0, std::pow(1.0 + x * x * x * x, -0.2));
}

double hilbert_pv_point(const Field& f, double x, double r) {
    const auto& g = f.grid();
    if (!(x > g.x_min && x < g.x_max)) fail(ErrorCode::PointOutsideGrid, "pv point outside grid");
    const double h = g.spacing();
    if (!(r > 2.0 * h)) fail(ErrorCode::RadiusTooSmall, "near radius must exceed two grid spacings");

    std::size_t first = 0, last = 0;
    if (!support_indices(f, first, last)) return 0.0;
    const double lo = g.x(first) - h, hi = g.x(last) + h;

    const auto& vals = f.values();
    auto fy = [&](double y) { return lagrange_sample(vals, g, y, 6); };
    const double fx = fy(x);
    auto panels = [&](double a, double b) { return std::max(1, static_cast<int>(std::ceil((b - a) / (4.0 * h)))); };

    // near piece, regularized by subtracting f(x)
    auto near = [&](double y) { return (fy(y) - fx) / (x - y); };
    double total = integrate_gl(near, x - r, x, panels(x - r, x)) + integrate_gl(near, x, x + r, panels(x, x + r));

    auto plain = [&](double y) { return fy(y) / (x - y); };
    auto piece = [&](double a, double b) {
        a = std::max(a, lo);
        b = std::min(b, hi);
        return (b > a) ? integrate_gl(plain, a, b, panels(a, b)) : 0.0;
    };
    const double rm = std::max(r, 1.0);
    // middle annulus r <= |x-y| <= 1 (empty when r >= 1)
    if (r < 1.0) total += piece(x - 1.0, x - r) + piece(x + r, x + 1.0);
    // far field, truncated at the support of f
    total += piece(lo, x - rm) + piece(x + rm, hi);
    return total / std::numbers::pi;
}

Field apply_hilbert(const Field& f, const HilbertMethod& method) {
    switch (method.kind) {
        case HilbertKind::SpectralPeriodic: return hilbert_spectral(f);
        case HilbertKind::PaddedLine: return hilbert_padded_line(f, method.pad_factor);
        case HilbertKind::PrincipalValue: {
            const auto& g = f.grid();
            const double hmin = 2.5 * g.spacing();
            std::vector<double> out(g.n_points, 0.0);
            for (std::size_t k = 1; k < g.n_points; ++k) {
                const double x = g.x(k);
                out[k] = hilbert_pv_point(f, x, std::max(near_radius(x, method.near_rule), hmin));
            }
            return Field(g, std::move(out), {"H[" + f.meta().label + "]", f.meta().time});
        }
    }
    return hilbert_spectral(f);
}

HilbertSuiteReport run_hilbert_suite(std::uint64_t seed) {
    HilbertSuiteReport rep;
    const double pi = std::numbers::pi;

    {
        Grid1D g = Grid1D::make(-pi, pi, 64);
        Field s = Field::sample(g, [](double x) { return std::sin(x); });
        Field hs = hilbert_spectral(s);
        for (std::size_t k = 0; k < g.n_points; ++k)
            rep.sin_error = std::max(rep.sin_error, std::abs(hs[k] + std::cos(g.x(k))));
    }
    {
        // random mean-zero band-limited field for the structural identities
        std::mt19937_64 rng(seed);
        std::normal_distribution<double> nd;
        Grid1D g = Grid1D::make(-pi, pi, 256);
        ComplexVec c(g.n_points / 2 + 1, 0.0);
        for (std::size_t j = 1; j < 60; ++j) c[j] = cplx(nd(rng), nd(rng)) / static_cast<double>(j);
        RealVec v = inverse_normalized(c, g.n_points);
        Field f(g, std::vector<double>(v.begin(), v.end()));
        Field hf = hilbert_spectral(f);
        Field hhf = hilbert_spectral(hf);
        const double fmax = max_abs(f), n2 = inner(f, f);
        for (std::size_t k = 0; k < g.n_points; ++k)
            rep.involution_error = std::max(rep.involution_error, std::abs(hhf[k] + f[k]) / fmax);
        rep.skew_error = std::abs(inner(f, hf)) / n2;
        rep.isometry_error = std::abs(l2_norm(hf) - l2_norm(f)) / l2_norm(f);
    }
    {
        Grid1D g = Grid1D::make(-240.0, 240.0, 16384);
        Field f = Field::sample(g, [](double x) { return smooth_window(x, 20.0, 80.0) / (1.0 + x * x); });
        Field hf = hilbert_padded_line(f, 8);
        double err = 0.0, ref = 0.0;
        for (std::size_t k = 0; k < g.n_points; ++k) {
            const double x = g.x(k);
            if (std::abs(x) > 5.0) continue;
            err = std::max(err, std::abs(hf[k] - x / (1.0 + x * x)));
            ref = std::max(ref, std::abs(x / (1.0 + x * x)));
        }
        rep.padded_error = err / ref;
    }
    {
        Grid1D g = Grid1D::make(-16.0, 16.0, 4096);
        Field f = Field::sample(g, [](double x) { return x * std::exp(-4.0 * x * x); });
        Field hs = hilbert_spectral(f);
        ComplexVec c = forward_normalized(hs.values().data(), g.n_points);
        std::mt19937_64 rng(seed + 1);
        std::uniform_real_distribution<double> ud(-2.0, 2.0);
        double worst = 0.0, scale = max_abs(hs);
        for (int i = 0; i < 32; ++i) {
            const double x = ud(rng);
            const double spec = eval_point(c, g, x, 0).d[0];
            const double pv = hilbert_pv_point(f, x, std::max(near_radius(x, NearRadiusRule::WeightedDecay), 2.5 * g.spacing()));
            worst = std::max(worst, std::abs(pv - spec) / scale);
        }
        rep.pv_vs_spectral = worst;
        rep.pv_points = 32;
    }
    rep.passed = rep.sin_error < 1e-12 && rep.involution_error < 1e-10 && rep.skew_error < 1e-10 &&
                 rep.isometry_error < 1e-10 && rep.padded_error < 1e-4 && rep.pv_vs_spectral < 1e-3;
    return rep;
}

}  // namespace bhlab
