#include "bhlab/profile.hpp"

#include <array>
#include <cmath>
#include <limits>

#include "bhlab/error.hpp"

namespace bhlab {

namespace {

void check_family(int i) {
    if (i < 1 || i > kMaxFamilyIndex)
        fail(ErrorCode::InvalidArgument, "family index must be in [1, " + std::to_string(kMaxFamilyIndex) + "]");
}

double ipow(double x, int p) {
    double r = 1.0;
    for (int k = 0; k < p; ++k) r *= x;
    return r;
}

double binom(int n, int k) {
    double r = 1.0;
    for (int j = 1; j <= k; ++j) r = r * (n - k + j) / j;
    return r;
}

using Series = std::array<double, 10>;

Series mul(const Series& a, const Series& b, int order) {
    Series c{};
    for (int i = 0; i <= order; ++i)
        for (int j = 0; i + j <= order; ++j) c[i + j] += a[i] * b[j];
    return c;
}

}  // namespace

double ui_eval(double X, int i) {
    check_family(i);
    if (!std::isfinite(X)) fail(ErrorCode::NonFiniteInput, "ui_eval: X not finite");
    if (X == 0.0) return 0.0;
    const int p = 2 * i + 1;
    // g(U) = U + U^p + X is strictly increasing; bracket [-B, B] with B = max(1, |X|)
    const double B = std::max(1.0, std::abs(X));
    double lo = -B, hi = B;
    auto g = [&](double u) { return u + ipow(u, p) + X; };

    const double ax = std::abs(X);
    double u = (ax < 1.0) ? -X : -std::copysign(std::pow(ax, 1.0 / p), X);
    const double tol = 1e-14 * (1.0 + ax);
    for (int it = 0; it < 200; ++it) {
        const double gu = g(u);
        if (gu > 0) hi = u;
        else lo = u;
        if (std::abs(gu) <= tol) return u;
        const double dg = 1.0 + p * ipow(u, p - 1);
        double next = u - gu / dg;
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        if (next == u || hi - lo <= 4.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(u)))
            return next;
        u = next;
    }
    fail(ErrorCode::NoConvergence, "ui_eval did not converge at X=" + std::to_string(X));
}

std::vector<double> ui_derivatives(double X, int i, int max_order) {
    if (max_order < 1 || max_order > 9) fail(ErrorCode::OrderOutOfRange, "profile derivative order must be 1..9");
    const double u0 = ui_eval(X, i);
    const int p = 2 * i + 1;

    // Local inversion: with U = u0 + w(h), the implicit equation becomes
    // sum_j a_j w^j = h, a_1 = -(1 + p u0^(p-1)), a_j = -C(p,j) u0^(p-j).
    std::array<double, 10> a{};
    for (int j = 1; j <= p && j <= 9; ++j) a[j] = -binom(p, j) * ipow(u0, p - j) - (j == 1 ? 1.0 : 0.0);

    // Fixed-point series reversion: w = (h - sum_{j>=2} a_j w^j) / a_1, one order per sweep.
    Series w{};
    w[1] = 1.0 / a[1];
    for (int sweep = 2; sweep <= max_order; ++sweep) {
        Series rhs{};
        rhs[1] = 1.0;
        Series wp = w;  // w^j, starting at j = 1
        for (int j = 2; j <= p && j <= max_order; ++j) {
            wp = mul(wp, w, max_order);
            for (int m = 0; m <= max_order; ++m) rhs[m] -= a[j] * wp[m];
        }
        Series next{};
        for (int m = 1; m <= max_order; ++m) next[m] = rhs[m] / a[1];
        w = next;
    }
    std::vector<double> d(max_order);
    double fact = 1.0;
    for (int n = 1; n <= max_order; ++n) {
        fact *= n;
        d[n - 1] = fact * w[n];
    }
    return d;
}

ProfilePoint ui_point(double X, int i, int max_order) {
    ProfilePoint pp;
    pp.X = X;
    pp.u = ui_eval(X, i);
    pp.derivatives = ui_derivatives(X, i, max_order);
    pp.family_index = i;
    return pp;
}

double u2_nu_eval(double X, double nu) {
    if (!(nu > 0)) fail(ErrorCode::NonPositiveNu, "nu must be positive");
    const double lam = std::pow(nu / 120.0, 0.25);
    return ui_eval(lam * X, 2) / lam;
}

std::vector<double> u2_nu_derivatives(double X, double nu, int max_order) {
    if (!(nu > 0)) fail(ErrorCode::NonPositiveNu, "nu must be positive");
    const double lam = std::pow(nu / 120.0, 0.25);
    auto d = ui_derivatives(lam * X, 2, max_order);
    double scale = 1.0;  // lam^(n-1)
    for (int n = 1; n <= max_order; ++n) {
        d[n - 1] *= scale;
        scale *= lam;
    }
    return d;
}

double u2_asymptotic(double X) {
    const double ax = std::abs(X);
    if (ax < 10.0) fail(ErrorCode::XTooSmall, "asymptotic expansion needs |X| >= 10");
    const double sg = (X > 0) ? 1.0 : -1.0;
    return -sg * std::pow(ax, 0.2) + sg / 5.0 * std::pow(ax, -0.6);
}

double ui_ode_residual(double X, int i) {
    const double u = ui_eval(X, i);
    const double du = ui_derivatives(X, i, 1)[0];
    const double two_i = 2.0 * i;
    return -u / two_i + ((two_i + 1.0) / two_i * X + u) * du;
}

bool BoundReport::all_passed() const {
    for (const auto& c : checks)
        if (!c.passed()) return false;
    return true;
}

BoundReport u2_bound_certificates(const std::vector<double>& X_samples, double l) {
    if (!(l > 0.0 && l < 0.2)) fail(ErrorCode::InvalidArgument, "l must lie in (0, 0.2)");
    BoundCheck amp{"amplitude", 0, 0, std::numeric_limits<double>::infinity()};
    BoundCheck slope{"slope", 0, 0, std::numeric_limits<double>::infinity()};
    BoundCheck away{"away_from_origin", 0, 0, std::numeric_limits<double>::infinity()};
    BoundCheck far{"far_slope", 0, 0, std::numeric_limits<double>::infinity()};

    auto record = [](BoundCheck& c, double margin) {
        ++c.evaluated;
        c.worst_margin = std::min(c.worst_margin, margin);
        // the X = 0 slope bound is an equality; allow rounding
        if (margin < -1e-13) ++c.failures;
    };

    for (double X : X_samples) {
        const double u = ui_eval(X, 2);
        const double du = ui_derivatives(X, 2, 1)[0];
        const double w = 1.0 + X * X * X * X;
        const double wneg = std::pow(w, -0.2);
        record(amp, std::pow(w, 0.05) - std::abs(u));
        record(slope, wneg - std::abs(du));
        if (std::abs(X) >= l) {
            // 0 > U2' >= -(1 - 2 l^4) w^(-1/5)
            const double lower = -(1.0 - 2.0 * l * l * l * l) * wneg;
            record(away, std::min(-du, du - lower));
        }
        if (std::abs(X) >= 100.0) {
            // -7/40 w^(-1/5) > U2' > -9/40 w^(-1/5)
            record(far, std::min(-7.0 / 40.0 * wneg - du, du + 9.0 / 40.0 * wneg));
        }
    }
    for (BoundCheck* c : {&amp, &slope, &away, &far})
        if (c->evaluated == 0) c->worst_margin = 0.0;
    return BoundReport{{amp, slope, away, far}};
}

}  // namespace bhlab
