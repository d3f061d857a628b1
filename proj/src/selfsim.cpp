#include "bhlab/selfsim.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>

#include "bhlab/error.hpp"

namespace bhlab {

double ModulationState::s() const {
    if (!(tau > t)) fail(ErrorCode::InvalidArgument, "tau must exceed t for the self-similar time to exist");
    return -std::log(tau - t);
}

FrameScaling FrameScaling::for_family(int i) {
    if (i < 1) fail(ErrorCode::InvalidArgument, "family index must be >= 1");
    const double a = 1.0 / (2.0 * i);
    return FrameScaling{a, 1.0 + a, 2 * i};
}

namespace {

std::vector<double> derivative_samples(const ComplexVec& coeffs, const Grid1D& grid, int order) {
    ComplexVec c(coeffs);
    for (std::size_t j = 0; j < c.size(); ++j) {
        cplx m(1.0, 0.0);
        for (int k = 0; k < order; ++k) m *= cplx(0.0, grid.wavenumber(j));
        c[j] *= m;
    }
    if (order % 2 == 1) c.back() = 0.0;
    RealVec v = inverse_normalized(c, grid.n_points);
    return std::vector<double>(v.begin(), v.end());
}

// Newton on f = u^(q), f' = u^(q+1), staying inside the search window.
std::optional<double> newton_root(const ComplexVec& c, const Grid1D& g, int q, double seed, double window) {
    double x = seed;
    for (int it = 0; it < 60; ++it) {
        PointJet pj = eval_point(c, g, x, q + 1);
        const double f = pj.d[q], fp = pj.d[q + 1];
        if (!(fp > 0.0) || !std::isfinite(f)) return std::nullopt;
        const double dx = -f / fp;
        x += dx;
        if (std::abs(x - seed) > window || !g.contains(x)) return std::nullopt;
        if (std::abs(dx) <= 4.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(x))) return x;
    }
    // accept a slowly creeping iterate if the residual is tiny relative to the slope scale
    PointJet pj = eval_point(c, g, x, q + 1);
    if (pj.d[q + 1] > 0.0 && std::abs(pj.d[q] / pj.d[q + 1]) < 1e-13) return x;
    return std::nullopt;
}

double bisect_root(const ComplexVec& c, const Grid1D& g, int q, double lo, double hi) {
    // f(lo) < 0 <= f(hi); safeguarded Newton inside the bracket
    double x = 0.5 * (lo + hi);
    for (int it = 0; it < 200; ++it) {
        PointJet pj = eval_point(c, g, x, q + 1);
        const double f = pj.d[q], fp = pj.d[q + 1];
        if (f < 0) lo = x;
        else hi = x;
        double next = (fp > 0) ? x - f / fp : 0.5 * (lo + hi);
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        if (std::abs(next - x) <= 4.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(x)))
            return next;
        x = next;
    }
    return x;
}

}  // namespace

Extraction extract_from_spectrum(const ComplexVec& c, const Grid1D& g, double t, std::optional<double> xi_hint,
                                 const FrameScaling& sc, double window) {
    const int q = sc.constraint_order;
    double seed;
    if (xi_hint) {
        seed = *xi_hint;
    } else {
        auto ux = derivative_samples(c, g, 1);
        seed = g.x(static_cast<std::size_t>(std::min_element(ux.begin(), ux.end()) - ux.begin()));
    }

    Extraction ex;
    auto root = newton_root(c, g, q, seed, window);
    if (!root) {
        ex.used_fallback = true;
        auto f = derivative_samples(c, g, q);
        double best = std::numeric_limits<double>::infinity();
        std::optional<std::pair<double, double>> bracket;
        for (std::size_t k = 0; k + 1 < g.n_points; ++k) {
            const double x0 = g.x(k), x1 = g.x(k + 1);
            if (std::abs(x0 - seed) > window && std::abs(x1 - seed) > window) continue;
            if (f[k] < 0.0 && f[k + 1] >= 0.0) {
                const double d = std::abs(0.5 * (x0 + x1) - seed);
                if (d < best) {
                    best = d;
                    bracket = {x0, x1};
                }
            }
        }
        if (!bracket)
            fail(ErrorCode::DegenerateModulation, "no sign change of the constraint derivative within the search window");
        root = bisect_root(c, g, q, bracket->first, bracket->second);
    }

    const double xi = *root;
    ex.physical = eval_point(c, g, xi, kMaxDerivativeOrder);
    const double ux = ex.physical.d[1];
    if (!(ux < 0.0)) fail(ErrorCode::PositiveSlope, "u_x(xi) >= 0, no modulated frame");
    const double theta = -1.0 / ux;

    ex.mod.t = t;
    ex.mod.tau = t + theta;
    ex.mod.xi = xi;
    ex.mod.kappa = ex.physical.d[0];
    ex.s = -std::log(theta);
    const double log_theta = std::log(theta);
    ex.jet[0] = 0.0;
    for (int n = 1; n <= kMaxDerivativeOrder; ++n) ex.jet[n] = std::exp(sc.jet_exponent(n) * log_theta) * ex.physical.d[n];
    ex.jet[1] = -1.0;  // exact by the definition of tau
    for (int n = 0; n <= kMaxDerivativeOrder; ++n)
        ex.hilbert[n] = std::exp(sc.jet_exponent(n) * log_theta) * ex.physical.h[n];
    return ex;
}

ModulationState extract_modulation(const Field& u, double t, const std::optional<ModulationState>& hint,
                                   const FrameScaling& scaling) {
    ComplexVec c = forward_normalized(u.values().data(), u.grid().n_points);
    std::optional<double> xi_hint;
    if (hint) xi_hint = hint->xi;
    return extract_from_spectrum(c, u.grid(), t, xi_hint, scaling).mod;
}

ModulationRates modulation_rhs(const Jet& jet, const Jet& hilbert, double s, double kappa) {
    const double j5 = jet[5];
    if (!(std::abs(j5) >= 10.0)) fail(ErrorCode::SmallFifthDerivative, "|d^5 U(0)| below 10");
    ModulationRates r;
    const double es = std::exp(-s);
    r.shift = (es * hilbert[4] - 10.0 * jet[2] * jet[3]) / j5;
    r.tau_dot = es * hilbert[1] - r.shift * jet[2];
    const double kappa_minus_xidot = std::exp(-0.25 * s) * r.shift;
    r.xi_dot = kappa - kappa_minus_xidot;
    r.kappa_dot = std::exp(s) * kappa_minus_xidot + std::exp(-0.25 * s) * hilbert[0];
    return r;
}

SelfSimilarFrame to_selfsimilar(const ComplexVec& c, const Grid1D& g, double t, const ModulationState& mod,
                                const Grid1D& X_grid, const FrameScaling& sc) {
    const double theta = mod.tau - t;
    if (!(theta > 0)) fail(ErrorCode::InvalidArgument, "tau must exceed t");
    const double lt = std::log(theta);
    const double len = std::exp(sc.b * lt), amp = std::exp(-sc.a * lt), slope = std::exp((sc.b - sc.a) * lt);

    SelfSimilarFrame fr;
    fr.s = -lt;
    fr.mod = mod;
    std::vector<double> U(X_grid.n_points);
    fr.dU.resize(X_grid.n_points);
    fr.HU.resize(X_grid.n_points);
    for (std::size_t k = 0; k < X_grid.n_points; ++k) {
        const double x = mod.xi + len * X_grid.x(k);
        if (!(x >= g.x_min && x <= g.x_max)) fail(ErrorCode::PointOutsideGrid, "X window maps outside the physical grid");
        PointJet pj = eval_point(c, g, x, 1);
        U[k] = amp * (pj.d[0] - mod.kappa);
        fr.dU[k] = slope * pj.d[1];
        fr.HU[k] = amp * pj.h[0];
    }
    fr.U = Field(X_grid, std::move(U), {"U", fr.s});

    PointJet pj = eval_point(c, g, mod.xi, kMaxDerivativeOrder);
    for (int n = 0; n <= kMaxDerivativeOrder; ++n) {
        const double f = std::exp(sc.jet_exponent(n) * lt);
        fr.origin_jet[n] = f * (n == 0 ? pj.d[0] - mod.kappa : pj.d[n]);
        fr.origin_hilbert[n] = f * pj.h[n];
    }
    fr.nu_estimate = fr.origin_jet[5];
    return fr;
}

SelfSimilarFrame to_selfsimilar(const Field& u, double t, const ModulationState& mod, const Grid1D& X_grid,
                                const FrameScaling& scaling) {
    ComplexVec c = forward_normalized(u.values().data(), u.grid().n_points);
    return to_selfsimilar(c, u.grid(), t, mod, X_grid, scaling);
}

double lagrange_window(const std::vector<double>& values, const Grid1D& grid, double x, int half_width) {
    const long n = static_cast<long>(values.size());
    const int np = 2 * half_width;
    if (n < np) fail(ErrorCode::InvalidArgument, "window too small for the interpolation stencil");
    const double u = (x - grid.x_min) / grid.spacing();
    if (u < -1e-9 || u > static_cast<double>(n - 1) + 1e-9) fail(ErrorCode::PointOutsideGrid, "outside sample window");
    const long k0 = static_cast<long>(std::floor(u));
    const long start = std::clamp(k0 - (half_width - 1), 0L, n - np);
    const double t = u - static_cast<double>(start);
    double num = 0.0, den = 0.0, binom = 1.0;
    for (int j = 0; j < np; ++j) {
        const double d = t - j;
        if (d == 0.0) return values[static_cast<std::size_t>(start + j)];
        const double w = ((j % 2) ? -binom : binom) / d;
        num += w * values[static_cast<std::size_t>(start + j)];
        den += w;
        binom = binom * (np - 1 - j) / (j + 1);
    }
    return num / den;
}

double from_selfsimilar(const SelfSimilarFrame& fr, double x, const FrameScaling& sc) {
    const double theta = fr.mod.tau - fr.mod.t;
    const double X = (x - fr.mod.xi) / std::pow(theta, sc.b);
    const auto& g = fr.U.grid();
    if (X < g.x_min || X > g.x(g.n_points - 1)) fail(ErrorCode::PointOutsideGrid, "x maps outside the frame window");
    return fr.mod.kappa + std::pow(theta, sc.a) * lagrange_window(fr.U.values(), g, X);
}

namespace {

double frame_shift(const SelfSimilarFrame& fr) {
    // e^{s/4} (kappa - xi_dot) in U_2 units; general a for other families
    return std::exp(0.25 * fr.s) * (fr.mod.kappa - fr.mod.xi_dot);
}

}  // namespace

Field transport_speed(const SelfSimilarFrame& fr, const ModulationState& mod, const FrameScaling& sc) {
    if (!(mod.tau_dot < 1.0)) fail(ErrorCode::TauDotGeOne, "tau_dot >= 1");
    const double shift = std::exp(sc.a * fr.s) * (mod.kappa - mod.xi_dot);
    const auto& g = fr.U.grid();
    std::vector<double> v(g.n_points);
    for (std::size_t k = 0; k < g.n_points; ++k) v[k] = (fr.U[k] + shift) / (1.0 - mod.tau_dot) + sc.b * g.x(k);
    return Field(g, std::move(v), {"V", fr.s});
}

std::vector<FlowPoint> lagrangian_flow(double X0, double s0, double s1, const SpeedProvider& speed, double max_step) {
    if (!(s1 >= s0)) fail(ErrorCode::InvalidArgument, "lagrangian_flow needs s1 >= s0");
    if (!(max_step > 0.0 && max_step <= 0.01)) max_step = 0.01;
    const int steps = std::max(1, static_cast<int>(std::ceil((s1 - s0) / max_step - 1e-12)));
    const double h = (s1 - s0) / steps;
    std::vector<FlowPoint> path;
    path.reserve(steps + 1);
    double X = X0, s = s0;
    path.push_back({s, X});
    auto V = [&](double x, double ss) {
        const double v = speed(x, ss);
        if (!std::isfinite(v)) fail(ErrorCode::LeftDomain, "trajectory left the speed field domain");
        return v;
    };
    for (int i = 0; i < steps; ++i) {
        const double k1 = V(X, s);
        const double k2 = V(X + 0.5 * h * k1, s + 0.5 * h);
        const double k3 = V(X + 0.5 * h * k2, s + 0.5 * h);
        const double k4 = V(X + h * k3, s + h);
        X += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        s = s0 + (i + 1) * h;
        path.push_back({s, X});
    }
    return path;
}

SpeedProvider frame_speed_provider(const std::vector<SelfSimilarFrame>& frames, const FrameScaling& sc) {
    struct Slice {
        double s;
        Grid1D grid;
        std::vector<double> v;
    };
    auto slices = std::make_shared<std::vector<Slice>>();
    for (const auto& fr : frames) {
        Field V = transport_speed(fr, fr.mod, sc);
        slices->push_back({fr.s, V.grid(), V.values()});
    }
    return [slices](double X, double s) -> double {
        const auto& sl = *slices;
        if (sl.empty()) return std::numeric_limits<double>::quiet_NaN();
        if (s < sl.front().s - 1e-12 || s > sl.back().s + 1e-12) return std::numeric_limits<double>::quiet_NaN();
        auto it = std::lower_bound(sl.begin(), sl.end(), s, [](const Slice& a, double v) { return a.s < v; });
        std::size_t hi = std::min<std::size_t>(static_cast<std::size_t>(it - sl.begin()), sl.size() - 1);
        std::size_t lo = hi == 0 ? 0 : hi - 1;
        const auto& g = sl[lo].grid;
        if (X < g.x_min || X > g.x(g.n_points - 1)) return std::numeric_limits<double>::quiet_NaN();
        const double va = lagrange_window(sl[lo].v, g, X);
        if (hi == lo) return va;
        const double vb = lagrange_window(sl[hi].v, sl[hi].grid, X);
        const double w = (s - sl[lo].s) / (sl[hi].s - sl[lo].s);
        return (1.0 - w) * va + w * vb;
    };
}

Field selfsimilar_residual(const SelfSimilarFrame& a, const SelfSimilarFrame& b, bool hilbert_on) {
    if (!(a.U.grid() == b.U.grid())) fail(ErrorCode::FramesMisaligned, "frames live on different X grids");
    if (!(b.s > a.s)) fail(ErrorCode::FramesMisaligned, "frames must be ordered in s");
    const auto& g = a.U.grid();
    const double ds = b.s - a.s;

    auto terms = [&](const SelfSimilarFrame& f, std::vector<double>& adv, std::vector<double>& forcing) {
        if (!(f.mod.tau_dot < 1.0)) fail(ErrorCode::TauDotGeOne, "tau_dot >= 1");
        const double inv = 1.0 / (1.0 - f.mod.tau_dot);
        const double shift = frame_shift(f);
        const double kd = std::exp(-0.75 * f.s) * f.mod.kappa_dot * inv;
        const double hw = hilbert_on ? std::exp(-f.s) * inv : 0.0;
        adv.resize(g.n_points);
        forcing.resize(g.n_points);
        for (std::size_t k = 0; k < g.n_points; ++k) {
            const double V = (f.U[k] + shift) * inv + 1.25 * g.x(k);
            adv[k] = V * f.dU[k];
            forcing[k] = -kd + hw * f.HU[k];
        }
    };
    std::vector<double> adv_a, adv_b, f_a, f_b;
    terms(a, adv_a, f_a);
    terms(b, adv_b, f_b);
    std::vector<double> r(g.n_points);
    for (std::size_t k = 0; k < g.n_points; ++k) {
        const double dUds = (b.U[k] - a.U[k]) / ds;
        const double Um = 0.5 * (a.U[k] + b.U[k]);
        r[k] = dUds - 0.25 * Um + 0.5 * (adv_a[k] + adv_b[k]) - 0.5 * (f_a[k] + f_b[k]);
    }
    return Field(g, std::move(r), {"ansatz_residual", 0.5 * (a.s + b.s)});
}

}  // namespace bhlab
