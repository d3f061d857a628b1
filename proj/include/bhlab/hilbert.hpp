#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "bhlab/grid.hpp"

namespace bhlab {

enum class HilbertKind { SpectralPeriodic, PaddedLine, PrincipalValue };
enum class NearRadiusRule { Unit, WeightedDecay };

struct HilbertMethod {
    HilbertKind kind = HilbertKind::SpectralPeriodic;
    int pad_factor = 4;                                   // PaddedLine only, >= 2
    NearRadiusRule near_rule = NearRadiusRule::WeightedDecay;  // PrincipalValue only
};

HilbertKind parse_hilbert_kind(const std::string& name);  // spectral | padded | pv
std::string to_string(HilbertKind kind);

// Fourier multiplier -i sgn(k); mean and Nyquist modes map to zero.
Field hilbert_spectral(const Field& f);

// Line transform of a compactly supported f: zero-pad by pad_factor, apply the
// periodic multiplier, restrict back to the original window.
Field hilbert_padded_line(const Field& f, int pad_factor);

// Principal-value integral at one point with the near/middle/far split:
//   near   |x-y| < r      : (f(y) - f(x)) / (x - y)   (regularized, no singularity)
//   middle r <= |x-y| <= 1 : f(y) / (x - y)
//   far    |x-y| > 1      : f(y) / (x - y), truncated at the support of f
// Composite Gauss-Legendre on each piece, f from local high-order interpolation.
double hilbert_pv_point(const Field& f, double x, double near_radius);

// min(1, (1+x^4)^(-1/5)) for WeightedDecay, 1 for Unit.
double near_radius(double x, NearRadiusRule rule);

// Whole-field application of the chosen method (PV is O(n^2); small grids only).
Field apply_hilbert(const Field& f, const HilbertMethod& method);

// Support of f as [first, last] sample index with |f| above a relative threshold.
// Returns false when f vanishes identically.
bool support_indices(const Field& f, std::size_t& first, std::size_t& last, double rel_tol = 1e-14);

// Built-in cross-validation used by the CLI: analytic pairs plus spectral vs PV
// on random interior points. Every number is reported; `passed` uses the
// documented tolerances.
struct HilbertSuiteReport {
    double sin_error = 0;         // max |H[sin] + cos|
    double involution_error = 0;  // max |H H f + f| / max |f|
    double skew_error = 0;        // |<f, Hf>| / ||f||^2
    double isometry_error = 0;    // | ||Hf|| - ||f|| | / ||f||
    double padded_error = 0;      // windowed 1/(1+x^2) vs x/(1+x^2), relative on |x| <= 5
    double pv_vs_spectral = 0;    // max relative error over random points
    int pv_points = 0;
    bool passed = false;
};
HilbertSuiteReport run_hilbert_suite(std::uint64_t seed = 12345);

}  // namespace bhlab
