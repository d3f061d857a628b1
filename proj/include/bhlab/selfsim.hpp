#pragma once

#include <array>
#include <functional>
#include <optional>
#include <vector>

#include "bhlab/grid.hpp"

namespace bhlab {

using Jet = std::array<double, kMaxDerivativeOrder + 1>;

struct ModulationState {
    double t = 0;
    double tau = 0;
    double xi = 0;
    double kappa = 0;
    double tau_dot = 0;
    double xi_dot = 0;
    double kappa_dot = 0;

    double theta() const { return tau - t; }
    double s() const;  // -log(tau - t)
};

// Scaling of the modulated frame for the profile family U_i:
// X = (x - xi)/theta^b, U = theta^(-a) (u - kappa), constraint U^(2i)(0) = 0.
struct FrameScaling {
    double a = 0.25;
    double b = 1.25;
    int constraint_order = 4;
    static FrameScaling for_family(int i);
    // d^n_X U(0) = theta^(n b - a) d^n_x u(xi)
    double jet_exponent(int n) const { return n * b - a; }
};

struct Extraction {
    ModulationState mod;            // tau, xi, kappa at time t (dots zero unless filled)
    double s = 0;
    PointJet physical;              // d^n u(xi), H[d^n u](xi)
    Jet jet{};                      // d^n_X U(0, s), n = 0..9
    Jet hilbert{};                  // [0]: H[U + e^{s a} kappa](0), [n]: H[d^n_X U](0)
    bool used_fallback = false;
};

// Core extraction working on normalized half-spectrum coefficients; xi_hint
// empty means "seed at argmin u_x". Newton on the constraint derivative, with a
// windowed sign-change scan as fallback.
Extraction extract_from_spectrum(const ComplexVec& coeffs, const Grid1D& grid, double t,
                                 std::optional<double> xi_hint, const FrameScaling& scaling = {},
                                 double window = 0.2);

ModulationState extract_modulation(const Field& u, double t, const std::optional<ModulationState>& hint,
                                   const FrameScaling& scaling = {});

struct ModulationRates {
    double tau_dot = 0;
    double xi_dot = 0;
    double kappa_dot = 0;
    double shift = 0;  // e^{s/4} (kappa - xi_dot)
};

// Triangular modulation system for the U_2 frame. hilbert = {H[U + e^{s/4}kappa](0),
// H[d_X U](0), ..., H[d^5_X U](0)} as in Extraction::hilbert.
ModulationRates modulation_rhs(const Jet& jet, const Jet& hilbert, double s, double kappa);

struct SelfSimilarFrame {
    double s = 0;
    ModulationState mod;
    Field U;                    // U(X, s) on the X grid
    std::vector<double> dU;     // d_X U on the same nodes
    std::vector<double> HU;     // H[U + e^{s/4} kappa] on the same nodes
    Jet origin_jet{};
    Jet origin_hilbert{};
    double nu_estimate = 0;     // d^5_X U(0, s)
};

SelfSimilarFrame to_selfsimilar(const Field& u, double t, const ModulationState& mod, const Grid1D& X_grid,
                                const FrameScaling& scaling = {});
// Same, from precomputed coefficients (no extra FFT).
SelfSimilarFrame to_selfsimilar(const ComplexVec& coeffs, const Grid1D& grid, double t, const ModulationState& mod,
                                const Grid1D& X_grid, const FrameScaling& scaling = {});

// Inverse map at a physical point: kappa + theta^a U((x - xi)/theta^b), U read by
// interpolation on the frame window. PointOutsideGrid when X leaves the window.
double from_selfsimilar(const SelfSimilarFrame& frame, double x, const FrameScaling& scaling = {});

// V = (U + e^{s/4}(kappa - xi_dot)) / (1 - tau_dot) + b X
Field transport_speed(const SelfSimilarFrame& frame, const ModulationState& mod, const FrameScaling& scaling = {});

struct FlowPoint {
    double s;
    double X;
};
// speed(X, s) returns NaN outside its domain, which raises LeftDomain.
using SpeedProvider = std::function<double(double X, double s)>;
std::vector<FlowPoint> lagrangian_flow(double X0, double s0, double s1, const SpeedProvider& speed,
                                       double max_step = 0.01);

// Speed field assembled from a frame sequence: linear in s, Lagrange in X.
SpeedProvider frame_speed_provider(const std::vector<SelfSimilarFrame>& frames, const FrameScaling& scaling = {});

// Ansatz residual between two consecutive frames, centered at the midpoint:
// dU/ds - U/4 + V dU/dX + e^{-3s/4} kappa_dot/(1 - tau_dot) - e^{-s}/(1 - tau_dot) H[U + e^{s/4} kappa].
// Frames must carry modulation rates (tau_dot, xi_dot, kappa_dot). `hilbert_on`
// drops the H-term for runs without the Hilbert source.
Field selfsimilar_residual(const SelfSimilarFrame& a, const SelfSimilarFrame& b, bool hilbert_on = true);

// Non-periodic Lagrange interpolation on window samples (stencil clamped inside).
double lagrange_window(const std::vector<double>& values, const Grid1D& grid, double x, int half_width = 6);

}  // namespace bhlab
