#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "bhlab/evolve.hpp"
#include "bhlab/selfsim.hpp"

namespace bhlab {

struct BlowupEstimate {
    double T_star = 0;
    double x_star = 0;
    std::size_t n_used = 0;      // records inside the last decade of tau - t
    double theta_first = 0;      // decade boundaries actually used
    double theta_last = 0;
    double tau_slope = 0;        // d tau / dt of the fit
};

// T* solves tau(T*) = T* for the linear fit of tau(t) over the last decade of
// tau - t; x* is the linear fit of xi(t) evaluated at T*.
BlowupEstimate blowup_estimate(const Trajectory& tr);
BlowupEstimate blowup_estimate(const std::vector<TrajectoryRecord>& records);

// (min, max) of (T* - t) ||u_x||_inf over the last decade.
std::pair<double, double> gradient_rate_monitor(const Trajectory& tr, double T_star);
std::pair<double, double> gradient_rate_monitor(const std::vector<TrajectoryRecord>& records, double T_star);

struct HolderFit {
    double exponent = 0;
    double stderr_ = 0;
    double r_min = 0;
    double r_max = 0;
    std::size_t n_radii = 0;
    std::vector<std::pair<double, double>> samples;  // (log r, log |u - u(x*)|), both sides
};

// Pooled log-log slope of |u(x* +- r) - u(x*)| over dyadic radii r_max 2^-k >= r_min.
HolderFit holder_fit(const Field& u, double x_star, double r_min, double r_max);

struct DecayFit {
    double rate = 0;
    double stderr_ = 0;
    std::size_t n = 0;
};

// Least-squares slope of log(value) against s.
DecayFit fit_decay(const std::vector<std::pair<double, double>>& series);

// Max of |value| over consecutive bins of width `bin` starting at s_lo, placed at
// the bin's argmax; bins without samples are skipped.
std::vector<std::pair<double, double>> sup_envelope(const std::vector<std::pair<double, double>>& series,
                                                    double s_lo, double s_hi, double bin);

struct ProfileError {
    double s = 0;
    double error = 0;  // sup_{|X| <= x_range} |U - U2^nu|
};

struct ProfileConvergence {
    double nu_hat = 0;
    std::vector<ProfileError> series;
};

ProfileConvergence profile_convergence(const std::vector<SelfSimilarFrame>& frames, double x_range = 5.0);
// True when the error decreases strictly over the frames with s >= s_from.
bool strictly_decreasing_tail(const ProfileConvergence& pc, double s_from);

// Origin-jet ODE consistency. Each sample carries the jet, the origin Hilbert
// values and the modulation rates it was recorded with.
struct OriginSample {
    double s = 0;
    Jet jet{};
    Jet hilbert{};
    double tau_dot = 0;
    double shift = 0;  // e^{s/4}(kappa - xi_dot)
};

struct OriginResidual {
    double s = 0;
    double r2 = 0;  // (d_s - 3/4) J2 - rhs
    double r3 = 0;  // (d_s - 1/2) J3 - rhs
    double r5 = 0;  // d_s (J5 - 120) - rhs
};

OriginSample origin_sample(const TrajectoryRecord& rec);
// Right-hand sides of the origin system at one sample: {J2 eq, J3 eq, J5 eq}
// (without the damping terms on the left).
std::array<double, 3> origin_rhs(const OriginSample& x);
std::vector<OriginResidual> origin_ode_check(const std::vector<OriginSample>& samples);

// Monitored inequality families, evaluated on physical snapshots.
struct BootstrapThresholds {
    double l = 0.1;              // near / middle boundary in X
    double c_near = 0.5;         // |d^n U~| <= c_near |X|^(6-n) + c_near0 for |X| <= l, n = 0..5
    double c_near0 = 0.5;
    double c_middle_u = 0.5;     // |U~| <= c (1 + X^4)^(1/20)
    double c_middle_1 = 0.5;     // |d_X U~| <= c (1 + X^4)^(-1/5)
    double middle_1_max = 5.0;   // X-range cap for the d_X U~ family (inf: full middle field)
    double c_middle_n = 1e6;     // |d^n_X U| <= c^(n^2/64) (1 + X^4)^(-1/5), n = 2..8 (c plays M^64)
    double c_far_1 = 4.0;        // |d_X U| <= c e^{-s}
    double c_far_n = 1e6;        // |d^n_X U| <= 2 c^(n^2/64) e^{-s}
    double l2_bound = 2.6457513110645907;  // ||d_X U||_L2 <= sqrt(7), hard
    double c_u_inf = 10.0;       // ||u||_inf <= c
    double c_x0_2 = 1.0;         // |J2| <= c e^{-3s/4}
    double c_x0_3 = 1.0;         // |J3| <= c e^{-s}
    double c_x0_5 = 0.5;         // |J5 - 120| <= c
    double constraint_tol = 1e-6;
    std::vector<std::string> families;  // empty: all
    std::size_t max_samples = 4096;     // per family and snapshot
};

struct BootstrapVerdict {
    std::size_t evaluated = 0;
    std::size_t passed = 0;
    double worst_margin = 0;  // min over samples of 1 - lhs/rhs
    double worst_at = 0;      // X (or s) of the worst sample
    bool hard = false;
    double pass_rate() const { return evaluated ? static_cast<double>(passed) / evaluated : 1.0; }
    bool ok() const { return passed == evaluated; }
};

using BootstrapVerdicts = std::map<std::string, BootstrapVerdict>;

const std::vector<std::string>& bootstrap_family_ids();
BootstrapVerdicts bootstrap_monitor(const Field& u, const ModulationState& mod, const BootstrapThresholds& th);
void merge_verdicts(BootstrapVerdicts& into, const BootstrapVerdicts& more);

struct ReportWindow {
    double s_lo = 0;
    double s_hi = 0;
};

struct DiagnosticsConfig {
    double holder_r_min = 0;       // 0: 8 theta^b at the final record
    double holder_r_max = 0.5;
    double decay_bin = 0.5;
    double profile_range = 5.0;
    std::optional<ReportWindow> window;  // resolved window; default [s_first, s_last]
    BootstrapThresholds bootstrap;
};

struct RunReport {
    double T_star = 0;
    double x_star = 0;
    BlowupEstimate blowup;
    double holder_center = 0;  // xi at the final record
    HolderFit holder;
    std::optional<std::string> holder_error;
    std::pair<double, double> gradient_rate_band{0, 0};
    std::map<std::string, DecayFit> decay_fits;
    double nu_estimate = 0;
    std::vector<ProfileError> profile_errors;
    bool profile_tail_decreasing = false;
    BootstrapVerdicts bootstrap;
    std::vector<OriginResidual> origin_residuals;
    ReportWindow window;
    double l2_drift = 0;           // relative, per unit time
    nlohmann::json config;         // resolved configuration
};

RunReport build_report(const Trajectory& tr, const DiagnosticsConfig& cfg, int family = 2);
nlohmann::json to_json(const RunReport& r);
nlohmann::json to_json(const BootstrapVerdicts& v);

// Plot data: (s, |J2|), (s, |J3|), (log r, log |du|), (s, profile error).
void write_plot_csvs(const RunReport& r, const Trajectory& tr, const std::string& dir);

}  // namespace bhlab
