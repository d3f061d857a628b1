#pragma once

#include <cstddef>
#include <vector>

#include "bhlab/grid.hpp"

namespace bhlab {

// Gauss-Legendre rule on [-1, 1].
struct GaussRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};
const GaussRule& gauss_legendre(int n);

// Integrate fn over [a, b] with `panels` equal panels of an n-point rule.
template <class F>
double integrate_gl(F&& fn, double a, double b, int panels, int n = 8) {
    const GaussRule& g = gauss_legendre(n);
    const double h = (b - a) / panels;
    double sum = 0.0;
    for (int p = 0; p < panels; ++p) {
        const double mid = a + (p + 0.5) * h;
        double part = 0.0;
        for (std::size_t q = 0; q < g.nodes.size(); ++q) part += g.weights[q] * fn(mid + 0.5 * h * g.nodes[q]);
        sum += 0.5 * h * part;
    }
    return sum;
}

// Barycentric Lagrange interpolation of periodic samples on a uniform grid,
// 2*half_width point stencil (degree 2*half_width - 1).
double lagrange_sample(const std::vector<double>& values, const Grid1D& grid, double x, int half_width = 6);

// C-infinity transition: 0 for t <= 0, 1 for t >= 1, built from exp(-1/t).
double smooth_step(double t);
// C-infinity even window: 1 on |x| <= a, 0 on |x| >= b.
double smooth_window(double x, double a, double b);

// Ordinary least squares y = a + b x; returns slope, intercept, slope stderr.
struct LinearFit {
    double slope = 0;
    double intercept = 0;
    double slope_stderr = 0;
    std::size_t n = 0;
};
LinearFit fit_line(const std::vector<double>& x, const std::vector<double>& y);

// Lagrange interpolation through arbitrary nodes (used for the four-node cubic in time).
double lagrange_eval(const std::vector<double>& nodes, const std::vector<double>& values, double t);
double lagrange_deriv(const std::vector<double>& nodes, const std::vector<double>& values, double t);

}  // namespace bhlab
