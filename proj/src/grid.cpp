#include "bhlab/grid.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <numbers>
#include <sstream>

#include "bhlab/error.hpp"

namespace bhlab {

bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

Grid1D Grid1D::make(double x_min, double x_max, std::size_t n_points) {
    if (!std::isfinite(x_min) || !std::isfinite(x_max) || !(x_max > x_min))
        fail(ErrorCode::InvalidGrid, "need finite x_min < x_max");
    if (n_points < 16 || !is_power_of_two(n_points))
        fail(ErrorCode::InvalidGrid, "n_points must be a power of two >= 16, got " + std::to_string(n_points));
    return Grid1D{x_min, x_max, n_points};
}

double Grid1D::wavenumber(std::size_t j) const { return 2.0 * std::numbers::pi * static_cast<double>(j) / length(); }

Field::Field(Grid1D grid, std::vector<double> values, FieldMeta meta)
    : grid_(grid), values_(std::move(values)), meta_(std::move(meta)) {
    if (values_.size() != grid_.n_points)
        fail(ErrorCode::InvalidArgument, "field size does not match grid");
    for (double v : values_)
        if (!std::isfinite(v)) fail(ErrorCode::NonFiniteInput, "field '" + meta_.label + "' has non-finite samples");
}

Field Field::sample(const Grid1D& grid, const std::function<double(double)>& fn, FieldMeta meta) {
    std::vector<double> v(grid.n_points);
    for (std::size_t k = 0; k < grid.n_points; ++k) v[k] = fn(grid.x(k));
    return Field(grid, std::move(v), std::move(meta));
}

Field Field::zeros(const Grid1D& grid, FieldMeta meta) {
    return Field(grid, std::vector<double>(grid.n_points, 0.0), std::move(meta));
}

Field Field::with_meta(FieldMeta meta) const { return Field(grid_, values_, std::move(meta)); }

double max_abs(const Field& f) {
    double m = 0.0;
    for (double v : f.values()) m = std::max(m, std::abs(v));
    return m;
}

double inner(const Field& a, const Field& b) {
    if (!(a.grid() == b.grid())) fail(ErrorCode::InvalidArgument, "inner: grids differ");
    double s = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) s += a[k] * b[k];
    return s * a.grid().spacing();
}

double l2_norm(const Field& f) { return std::sqrt(inner(f, f)); }

Field axpy(double a, const Field& x, const Field& y) {
    if (!(x.grid() == y.grid())) fail(ErrorCode::InvalidArgument, "axpy: grids differ");
    std::vector<double> v(x.size());
    for (std::size_t k = 0; k < v.size(); ++k) v[k] = a * x[k] + y[k];
    return Field(x.grid(), std::move(v), y.meta());
}

std::size_t dealias_cutoff(std::size_t n_points) { return n_points / 3; }

namespace {

void check_order(int order, int lo) {
    if (order < lo || order > kMaxDerivativeOrder)
        fail(ErrorCode::OrderOutOfRange, "derivative order " + std::to_string(order) + " outside [" +
                                             std::to_string(lo) + ", " + std::to_string(kMaxDerivativeOrder) + "]");
}

cplx ik_power(double k, int order) {
    // (i k)^order without pow() on complex numbers
    cplx r(1.0, 0.0);
    for (int m = 0; m < order; ++m) r *= cplx(0.0, k);
    return r;
}

}  // namespace

Field spectral_derivative(const Field& f, int order) {
    check_order(order, 1);
    const auto& g = f.grid();
    const std::size_t n = g.n_points;
    ComplexVec c = forward_normalized(f.values().data(), n);
    for (std::size_t j = 0; j < c.size(); ++j) c[j] *= ik_power(g.wavenumber(j), order);
    if (order % 2 == 1) c[n / 2] = 0.0;
    RealVec out = inverse_normalized(c, n);
    return Field(g, std::vector<double>(out.begin(), out.end()), {f.meta().label + "_d" + std::to_string(order), f.meta().time});
}

Field dealias(const Field& f) {
    const std::size_t n = f.grid().n_points;
    ComplexVec c = forward_normalized(f.values().data(), n);
    for (std::size_t j = dealias_cutoff(n) + 1; j < c.size(); ++j) c[j] = 0.0;
    RealVec out = inverse_normalized(c, n);
    return Field(f.grid(), std::vector<double>(out.begin(), out.end()), f.meta());
}

PointJet eval_point(const ComplexVec& coeffs, const Grid1D& grid, double x0, int max_order) {
    check_order(max_order, 0);
    const std::size_t nh = coeffs.size() - 1;  // Nyquist index
    const double q = (x0 - grid.x_min) / grid.length();
    const double two_pi = 2.0 * std::numbers::pi;
    const double dk = two_pi / grid.length();
    const cplx step = std::polar(1.0, two_pi * q);

    std::array<double, kMaxDerivativeOrder + 1> d{}, h{};
    cplx z(1.0, 0.0);
    for (std::size_t j = 0; j <= nh; ++j) {
        if (j % 64 == 0) {
            // re-anchor the phase recurrence to keep its drift at rounding level
            const double jq = static_cast<double>(j) * q;
            z = std::polar(1.0, two_pi * (jq - std::floor(jq)));
        }
        const bool edge = (j == 0 || j == nh);
        cplx t = coeffs[j] * z * (edge ? 1.0 : 2.0);
        const double k = dk * static_cast<double>(j);
        for (int m = 0; m <= max_order; ++m) {
            d[m] += t.real();
            if (!edge) h[m] += t.imag();
            t = cplx(-k * t.imag(), k * t.real());
        }
        z *= step;
    }
    return PointJet{d, h};
}

std::vector<double> local_jet(const Field& f, double x0, int max_order) {
    check_order(max_order, 0);
    const auto& g = f.grid();
    if (!(x0 >= g.x_min && x0 <= g.x_max))
        fail(ErrorCode::PointOutsideGrid, "x0 outside [x_min, x_max]");
    ComplexVec c = forward_normalized(f.values().data(), g.n_points);
    PointJet pj = eval_point(c, g, x0, max_order);
    return std::vector<double>(pj.d.begin(), pj.d.begin() + max_order + 1);
}

std::size_t nearest_index(const Grid1D& grid, double x) {
    const double r = std::round((x - grid.x_min) / grid.spacing());
    if (r <= 0.0) return 0;
    const auto k = static_cast<std::size_t>(r);
    return std::min(k, grid.n_points - 1);
}

void write_field_csv(const std::string& path, const Field& f) {
    std::ofstream os(path);
    if (!os) fail(ErrorCode::IoError, "cannot write " + path);
    const auto& g = f.grid();
    os << std::setprecision(17);
    os << "# grid x_min=" << g.x_min << " x_max=" << g.x_max << " n=" << g.n_points << " time=" << f.meta().time
       << " label=" << (f.meta().label.empty() ? "-" : f.meta().label) << "\n";
    os << "x,value\n";
    for (std::size_t k = 0; k < f.size(); ++k) os << g.x(k) << "," << f[k] << "\n";
}

Field read_field_csv(const std::string& path) {
    std::ifstream is(path);
    if (!is) fail(ErrorCode::IoError, "cannot read " + path);
    std::string line;
    std::getline(is, line);
    if (line.rfind("# grid", 0) != 0) fail(ErrorCode::IoError, path + ": missing grid header");
    double x_min = 0, x_max = 0, time = 0;
    std::size_t n = 0;
    std::string label;
    std::istringstream hs(line.substr(6));
    std::string tok;
    while (hs >> tok) {
        auto eq = tok.find('=');
        if (eq == std::string::npos) continue;
        auto key = tok.substr(0, eq), val = tok.substr(eq + 1);
        if (key == "x_min") x_min = std::stod(val);
        else if (key == "x_max") x_max = std::stod(val);
        else if (key == "n") n = std::stoul(val);
        else if (key == "time") time = std::stod(val);
        else if (key == "label") label = (val == "-") ? "" : val;
    }
    Grid1D g = Grid1D::make(x_min, x_max, n);
    std::getline(is, line);  // column names
    std::vector<double> v;
    v.reserve(n);
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        auto comma = line.find(',');
        if (comma == std::string::npos) fail(ErrorCode::IoError, path + ": malformed row");
        v.push_back(std::stod(line.substr(comma + 1)));
    }
    if (v.size() != n) fail(ErrorCode::IoError, path + ": expected " + std::to_string(n) + " rows");
    return Field(g, std::move(v), {label, time});
}

}  // namespace bhlab
