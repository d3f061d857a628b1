#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "bhlab/fft.hpp"

namespace bhlab {

inline constexpr int kMaxDerivativeOrder = 9;

// Uniform periodic grid: sample k sits at x_min + k*spacing, k = 0..n_points-1.
struct Grid1D {
    double x_min = -1.0;
    double x_max = 1.0;
    std::size_t n_points = 16;

    static Grid1D make(double x_min, double x_max, std::size_t n_points);

    double length() const { return x_max - x_min; }
    double spacing() const { return length() / static_cast<double>(n_points); }
    double x(std::size_t k) const { return x_min + static_cast<double>(k) * spacing(); }
    // angular wavenumber of half-spectrum index j
    double wavenumber(std::size_t j) const;
    bool contains(double x) const { return x >= x_min && x <= x_max; }
    // same box, different resolution
    Grid1D with_points(std::size_t n) const { return make(x_min, x_max, n); }

    bool operator==(const Grid1D&) const = default;
};

bool is_power_of_two(std::size_t n);

struct FieldMeta {
    std::string label;
    double time = 0.0;
};

// Immutable samples of a real function on a Grid1D. Finite by construction.
class Field {
public:
    Field() = default;
    Field(Grid1D grid, std::vector<double> values, FieldMeta meta = {});

    static Field sample(const Grid1D& grid, const std::function<double(double)>& fn, FieldMeta meta = {});
    static Field zeros(const Grid1D& grid, FieldMeta meta = {});

    const Grid1D& grid() const { return grid_; }
    const std::vector<double>& values() const { return values_; }
    double operator[](std::size_t k) const { return values_[k]; }
    std::size_t size() const { return values_.size(); }
    const FieldMeta& meta() const { return meta_; }

    Field with_meta(FieldMeta meta) const;

private:
    Grid1D grid_;
    std::vector<double> values_;
    FieldMeta meta_;
};

double max_abs(const Field& f);
double l2_norm(const Field& f);  // sqrt(sum f^2 * dx)
double inner(const Field& a, const Field& b);
Field axpy(double a, const Field& x, const Field& y);  // a*x + y

// Largest kept half-spectrum index under the 2/3 rule.
std::size_t dealias_cutoff(std::size_t n_points);

// Spectral ops. Orders are 1..9; the Nyquist coefficient is dropped for odd orders.
Field spectral_derivative(const Field& f, int order);
Field dealias(const Field& f);

// Fourier-interpolated values f, f', ..., f^(max_order) at an arbitrary point.
std::vector<double> local_jet(const Field& f, double x0, int max_order);

// Derivative and Hilbert-transform jets of a band-limited function at one point.
// d[m] = f^(m)(x0), h[m] = H[f^(m)](x0) with the periodic multiplier -i sgn(k).
struct PointJet {
    std::array<double, kMaxDerivativeOrder + 1> d{};
    std::array<double, kMaxDerivativeOrder + 1> h{};
};

// Evaluates the trigonometric interpolant given normalized half-spectrum
// coefficients. One O(n) pass delivers every order at once.
PointJet eval_point(const ComplexVec& coeffs, const Grid1D& grid, double x0, int max_order);

// Index of the grid sample nearest to x (clamped, periodic wrap ignored).
std::size_t nearest_index(const Grid1D& grid, double x);

// Field CSV: '# grid x_min=.. x_max=.. n=.. time=.. label=..' then 'x,value' rows.
void write_field_csv(const std::string& path, const Field& f);
Field read_field_csv(const std::string& path);

}  // namespace bhlab
