#include "bhlab/numerics.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>

#include "bhlab/error.hpp"

namespace bhlab {

const GaussRule& gauss_legendre(int n) {
    static std::mutex m;
    static std::map<int, GaussRule> cache;
    std::lock_guard lock(m);
    auto it = cache.find(n);
    if (it != cache.end()) return it->second;
    if (n < 1 || n > 64) fail(ErrorCode::InvalidArgument, "gauss_legendre: n out of range");

    GaussRule r;
    r.nodes.resize(n);
    r.weights.resize(n);
    for (int i = 0; i < n; ++i) {
        // Newton on P_n from the Chebyshev-like initial guess
        double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int it2 = 0; it2 < 100; ++it2) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        r.nodes[i] = x;
        r.weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    return cache.emplace(n, std::move(r)).first->second;
}

double lagrange_sample(const std::vector<double>& values, const Grid1D& grid, double x, int half_width) {
    const auto n = static_cast<long>(grid.n_points);
    const double u = (x - grid.x_min) / grid.spacing();
    const double base = std::floor(u);
    const double t = u - base;
    const long k0 = static_cast<long>(base);
    auto at = [&](long k) { return values[static_cast<std::size_t>(((k % n) + n) % n)]; };
    if (t == 0.0) return at(k0);

    // equispaced barycentric weights (-1)^j C(2m-1, j) over nodes j - (m-1)
    const int np = 2 * half_width;
    double num = 0.0, den = 0.0, binom = 1.0;
    for (int j = 0; j < np; ++j) {
        const double node = static_cast<double>(j - (half_width - 1));
        const double w = ((j % 2) ? -binom : binom) / (t - node);
        num += w * at(k0 + j - (half_width - 1));
        den += w;
        binom = binom * (np - 1 - j) / (j + 1);
    }
    return num / den;
}

double smooth_step(double t) {
    if (t <= 0.0) return 0.0;
    if (t >= 1.0) return 1.0;
    const double a = std::exp(-1.0 / t), b = std::exp(-1.0 / (1.0 - t));
    return a / (a + b);
}

double smooth_window(double x, double a, double b) { return 1.0 - smooth_step((std::abs(x) - a) / (b - a)); }

LinearFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
    const std::size_t n = x.size();
    if (n < 2 || y.size() != n) fail(ErrorCode::InvalidArgument, "fit_line needs >= 2 matching points");
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < n; ++i) { mx += x[i]; my += y[i]; }
    mx /= n;
    my /= n;
    double sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    if (sxx <= 0) fail(ErrorCode::InvalidArgument, "fit_line: degenerate abscissae");
    LinearFit f;
    f.n = n;
    f.slope = sxy / sxx;
    f.intercept = my - f.slope * mx;
    if (n > 2) {
        double rss = 0;
        for (std::size_t i = 0; i < n; ++i) {
            const double r = y[i] - f.intercept - f.slope * x[i];
            rss += r * r;
        }
        f.slope_stderr = std::sqrt(rss / static_cast<double>(n - 2) / sxx);
    }
    return f;
}

double lagrange_eval(const std::vector<double>& nodes, const std::vector<double>& values, double t) {
    double s = 0.0;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        double l = 1.0;
        for (std::size_t j = 0; j < nodes.size(); ++j)
            if (j != i) l *= (t - nodes[j]) / (nodes[i] - nodes[j]);
        s += values[i] * l;
    }
    return s;
}

double lagrange_deriv(const std::vector<double>& nodes, const std::vector<double>& values, double t) {
    double s = 0.0;
    const std::size_t n = nodes.size();
    for (std::size_t i = 0; i < n; ++i) {
        double dl = 0.0;
        for (std::size_t m = 0; m < n; ++m) {
            if (m == i) continue;
            double prod = 1.0 / (nodes[i] - nodes[m]);
            for (std::size_t j = 0; j < n; ++j)
                if (j != i && j != m) prod *= (t - nodes[j]) / (nodes[i] - nodes[j]);
            dl += prod;
        }
        s += values[i] * dl;
    }
    return s;
}

}  // namespace bhlab
