#include "bhlab/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>

#include "bhlab/error.hpp"
#include "bhlab/fft.hpp"
#include "bhlab/numerics.hpp"
#include "bhlab/profile.hpp"

namespace bhlab {

namespace {

// records carrying a valid frame (theta > 0), in order
std::vector<const TrajectoryRecord*> framed(const std::vector<TrajectoryRecord>& recs) {
    std::vector<const TrajectoryRecord*> out;
    for (const auto& r : recs)
        if (r.mod.theta() > 0.0 && std::isfinite(r.s)) out.push_back(&r);
    return out;
}

std::vector<const TrajectoryRecord*> last_decade(const std::vector<TrajectoryRecord>& recs) {
    auto fr = framed(recs);
    if (fr.empty()) fail(ErrorCode::InsufficientDecade, "trajectory has no extracted frames");
    const double th_last = fr.back()->mod.theta();
    if (fr.front()->mod.theta() < 10.0 * th_last * (1.0 - 1e-9))
        fail(ErrorCode::InsufficientDecade, "tau - t spans less than one decade");
    std::vector<const TrajectoryRecord*> out;
    for (const auto* r : fr)
        if (r->mod.theta() <= 10.0 * th_last) out.push_back(r);
    if (out.size() < 10)
        fail(ErrorCode::InsufficientDecade, "only " + std::to_string(out.size()) + " frames in the last decade");
    return out;
}

}  // namespace

BlowupEstimate blowup_estimate(const std::vector<TrajectoryRecord>& records) {
    const auto dec = last_decade(records);
    std::vector<double> t, tau, xi;
    for (const auto* r : dec) {
        t.push_back(r->t);
        tau.push_back(r->mod.tau);
        xi.push_back(r->mod.xi);
    }
    const LinearFit ft = fit_line(t, tau);
    const LinearFit fx = fit_line(t, xi);
    BlowupEstimate b;
    b.tau_slope = ft.slope;
    b.T_star = ft.intercept / (1.0 - ft.slope);
    b.x_star = fx.intercept + fx.slope * b.T_star;
    b.n_used = dec.size();
    b.theta_first = dec.front()->mod.theta();
    b.theta_last = dec.back()->mod.theta();
    return b;
}

BlowupEstimate blowup_estimate(const Trajectory& tr) { return blowup_estimate(tr.records); }

std::pair<double, double> gradient_rate_monitor(const std::vector<TrajectoryRecord>& records, double T_star) {
    const auto dec = last_decade(records);
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (const auto* r : dec) {
        const double c = (T_star - r->t) * r->max_slope;
        lo = std::min(lo, c);
        hi = std::max(hi, c);
    }
    return {lo, hi};
}

std::pair<double, double> gradient_rate_monitor(const Trajectory& tr, double T_star) {
    return gradient_rate_monitor(tr.records, T_star);
}

HolderFit holder_fit(const Field& u, double x_star, double r_min, double r_max) {
    const auto& g = u.grid();
    if (!(r_min >= 4.0 * g.spacing() * (1.0 - 1e-12)))
        fail(ErrorCode::InvalidArgument, "r_min must be at least 4 grid spacings");
    if (!(r_max <= 0.5) || !(r_max > r_min)) fail(ErrorCode::InvalidArgument, "need r_min < r_max <= 0.5");
    if (!g.contains(x_star - r_max) || !g.contains(x_star + r_max))
        fail(ErrorCode::PointOutsideGrid, "Holder window leaves the grid");
    std::vector<double> radii;
    for (double r = r_max; r >= r_min * (1.0 - 1e-12); r *= 0.5) radii.push_back(r);
    if (radii.size() < 8)
        fail(ErrorCode::WindowTooNarrow, std::to_string(radii.size()) + " dyadic radii in the window (need 8)");

    const ComplexVec c = forward_normalized(u.values().data(), g.n_points);
    const double u0 = eval_point(c, g, x_star, 0).d[0];
    HolderFit h;
    h.r_min = radii.back();
    h.r_max = r_max;
    h.n_radii = radii.size();
    std::vector<double> lx, ly;
    for (double r : radii)
        for (double sgn : {-1.0, 1.0}) {
            const double du = std::abs(eval_point(c, g, x_star + sgn * r, 0).d[0] - u0);
            if (!(du > 0.0)) continue;
            lx.push_back(std::log(r));
            ly.push_back(std::log(du));
            h.samples.emplace_back(lx.back(), ly.back());
        }
    const LinearFit f = fit_line(lx, ly);
    h.exponent = f.slope;
    h.stderr_ = f.slope_stderr;
    return h;
}

DecayFit fit_decay(const std::vector<std::pair<double, double>>& series) {
    if (series.size() < 6) fail(ErrorCode::InvalidArgument, "fit_decay needs at least 6 points");
    std::vector<double> s, ly;
    for (const auto& [x, v] : series) {
        if (!(v > 0.0)) fail(ErrorCode::NonPositiveValues, "fit_decay needs positive values");
        s.push_back(x);
        ly.push_back(std::log(v));
    }
    const LinearFit f = fit_line(s, ly);
    return {f.slope, f.slope_stderr, series.size()};
}

std::vector<std::pair<double, double>> sup_envelope(const std::vector<std::pair<double, double>>& series,
                                                    double s_lo, double s_hi, double bin) {
    if (!(bin > 0.0)) fail(ErrorCode::InvalidArgument, "bin width must be positive");
    const int nbins = std::max(1, static_cast<int>(std::floor((s_hi - s_lo) / bin + 1e-9)));
    std::vector<std::pair<double, double>> best(nbins, {0.0, -1.0});
    for (const auto& [s, v] : series) {
        if (s < s_lo - 1e-12 || s > s_hi + 1e-12) continue;
        const int k = std::clamp(static_cast<int>(std::floor((s - s_lo) / bin)), 0, nbins - 1);
        if (std::abs(v) > best[k].second) best[k] = {s, std::abs(v)};
    }
    std::vector<std::pair<double, double>> out;
    for (const auto& b : best)
        if (b.second >= 0.0) out.push_back(b);
    return out;
}

ProfileConvergence profile_convergence(const std::vector<SelfSimilarFrame>& frames, double x_range) {
    if (frames.size() < 3 || frames.back().s - frames.front().s < 1.0 - 1e-12)
        fail(ErrorCode::InvalidArgument, "profile_convergence needs >= 3 frames spanning >= 1 unit of s");
    ProfileConvergence pc;
    pc.nu_hat = frames.back().origin_jet[5];
    for (const auto& f : frames) {
        const auto& g = f.U.grid();
        double e = 0.0;
        for (std::size_t k = 0; k < g.n_points; ++k) {
            const double X = g.x(k);
            if (std::abs(X) > x_range) continue;
            e = std::max(e, std::abs(f.U.values()[k] - u2_nu_eval(X, pc.nu_hat)));
        }
        pc.series.push_back({f.s, e});
    }
    return pc;
}

bool strictly_decreasing_tail(const ProfileConvergence& pc, double s_from) {
    const ProfileError* prev = nullptr;
    std::size_t n = 0;
    for (const auto& p : pc.series) {
        if (p.s < s_from) continue;
        if (prev && !(p.error < prev->error)) return false;
        prev = &p;
        ++n;
    }
    return n >= 2;
}

OriginSample origin_sample(const TrajectoryRecord& rec) {
    OriginSample o;
    o.s = rec.s;
    o.jet = rec.jet;
    o.hilbert = rec.hilbert;
    o.tau_dot = rec.mod.tau_dot;
    o.shift = std::exp(0.25 * rec.s) * (rec.mod.kappa - rec.mod.xi_dot);
    return o;
}

std::array<double, 3> origin_rhs(const OriginSample& x) {
    const double d = 1.0 - x.tau_dot;
    const double td = x.tau_dot / d;
    const double e = std::exp(-x.s) / d;
    const auto& J = x.jet;
    const auto& h = x.hilbert;
    const double r2 = 3.0 * td * J[2] - x.shift / d * J[3] + e * h[2];
    const double r3 = 4.0 * td * J[3] + e * h[3] - 3.0 / d * J[2] * J[2];
    const double r5 = 6.0 * td * (J[5] - 120.0) + e * h[5] + 720.0 * td - x.shift / d * J[6] - 10.0 / d * J[3] * J[3];
    return {r2, r3, r5};
}

std::vector<OriginResidual> origin_ode_check(const std::vector<OriginSample>& xs) {
    if (xs.size() < 3) fail(ErrorCode::FramesMisaligned, "need at least three samples");
    for (std::size_t i = 1; i < xs.size(); ++i)
        if (!(xs[i].s > xs[i - 1].s)) fail(ErrorCode::FramesMisaligned, "samples must have increasing s");
    std::vector<OriginResidual> out;
    for (std::size_t i = 1; i + 1 < xs.size(); ++i) {
        const std::vector<double> s{xs[i - 1].s, xs[i].s, xs[i + 1].s};
        auto ds = [&](int n, double shift) {
            const std::vector<double> v{xs[i - 1].jet[n] - shift, xs[i].jet[n] - shift, xs[i + 1].jet[n] - shift};
            return lagrange_deriv(s, v, xs[i].s);
        };
        const auto rhs = origin_rhs(xs[i]);
        OriginResidual r;
        r.s = xs[i].s;
        r.r2 = ds(2, 0.0) - 0.75 * xs[i].jet[2] - rhs[0];
        r.r3 = ds(3, 0.0) - 0.5 * xs[i].jet[3] - rhs[1];
        r.r5 = ds(5, 120.0) - rhs[2];
        out.push_back(r);
    }
    return out;
}

const std::vector<std::string>& bootstrap_family_ids() {
    static const std::vector<std::string> ids{"near",   "middle_U", "middle_dU", "middle_dnU", "far_dU", "far_dnU",
                                              "L2_dU",  "u_Linf",   "x0_d2",     "x0_d3",      "x0_d5",  "constraint"};
    return ids;
}

namespace {

struct Tally {
    BootstrapVerdict v;
    bool any = false;
    void add(double lhs, double rhs, double where) {
        ++v.evaluated;
        if (lhs <= rhs) ++v.passed;
        const double m = rhs > 0.0 ? 1.0 - lhs / rhs : (lhs <= 0.0 ? 1.0 : -std::numeric_limits<double>::infinity());
        if (!any || m < v.worst_margin) {
            v.worst_margin = m;
            v.worst_at = where;
        }
        any = true;
    }
};

ComplexVec derivative_coeffs(const ComplexVec& c, const Grid1D& g, int order) {
    ComplexVec d(c);
    for (std::size_t j = 0; j < d.size(); ++j) {
        cplx m(1.0, 0.0);
        for (int k = 0; k < order; ++k) m *= cplx(0.0, g.wavenumber(j));
        d[j] *= m;
    }
    if (order % 2 == 1) d.back() = 0.0;
    return d;
}

}  // namespace

BootstrapVerdicts bootstrap_monitor(const Field& u, const ModulationState& mod, const BootstrapThresholds& th) {
    const auto enabled = [&](const std::string& id) {
        return th.families.empty() || std::find(th.families.begin(), th.families.end(), id) != th.families.end();
    };
    const FrameScaling sc = FrameScaling::for_family(2);
    const double theta = mod.theta();
    if (!(theta > 0.0)) fail(ErrorCode::InvalidArgument, "bootstrap_monitor needs tau > t");
    const double s = -std::log(theta);
    const auto& g = u.grid();
    const std::size_t n = g.n_points;
    const ComplexVec c = forward_normalized(u.values().data(), n);
    const double tb = std::pow(theta, sc.b);
    auto jet_scale = [&](int k) { return std::pow(theta, sc.jet_exponent(k)); };
    std::map<std::string, Tally> t;

    // origin jet at xi
    const PointJet pj = eval_point(c, g, mod.xi, 6);
    Jet J{};
    for (int k = 1; k <= 6; ++k) J[k] = jet_scale(k) * pj.d[k];
    J[0] = (pj.d[0] - mod.kappa) * std::pow(theta, -sc.a);
    if (enabled("x0_d2")) t["x0_d2"].add(std::abs(J[2]), th.c_x0_2 * std::exp(-0.75 * s), s);
    if (enabled("x0_d3")) t["x0_d3"].add(std::abs(J[3]), th.c_x0_3 * std::exp(-s), s);
    if (enabled("x0_d5")) t["x0_d5"].add(std::abs(J[5] - 120.0), th.c_x0_5, s);
    if (enabled("constraint")) {
        t["constraint"].add(std::abs(J[0]), th.constraint_tol, 0.0);
        t["constraint"].add(std::abs(J[1] + 1.0), th.constraint_tol, 1.0);
        t["constraint"].add(std::abs(J[4]), th.constraint_tol, 4.0);
    }

    if (enabled("near")) {
        for (int i = -8; i <= 8; ++i) {
            const double X = th.l * i / 8.0;
            const PointJet q = eval_point(c, g, mod.xi + tb * X, 5);
            const auto d2 = ui_derivatives(X, 2, 5);
            for (int k = 0; k <= 5; ++k) {
                const double Uk = k == 0 ? (q.d[0] - mod.kappa) * std::pow(theta, -sc.a) : jet_scale(k) * q.d[k];
                const double U2k = k == 0 ? ui_eval(X, 2) : d2[k - 1];
                t["near"].add(std::abs(Uk - U2k), th.c_near * std::pow(std::abs(X), 6 - k) + th.c_near0, X);
            }
        }
    }

    // node-based middle and far fields
    const double x_mid = 0.5;  // |X| = e^{5s/4}/2  <=>  |x - xi| = 1/2
    std::vector<std::size_t> mid, far;
    for (std::size_t k = 0; k < n; ++k) {
        const double r = std::abs(g.x(k) - mod.xi);
        if (r >= x_mid)
            far.push_back(k);
        else if (r >= th.l * tb)
            mid.push_back(k);
    }
    auto thin = [&](std::vector<std::size_t>& idx) {
        if (idx.size() <= th.max_samples) return;
        std::vector<std::size_t> out;
        const double stride = static_cast<double>(idx.size()) / th.max_samples;
        for (std::size_t i = 0; i < th.max_samples; ++i) out.push_back(idx[static_cast<std::size_t>(i * stride)]);
        idx.swap(out);
    };
    thin(mid);
    thin(far);

    const bool need_d1 = enabled("middle_dU") || enabled("far_dU") || enabled("L2_dU");
    RealVec d1;
    if (need_d1) d1 = inverse_normalized(derivative_coeffs(c, g, 1), n);

    if (enabled("middle_U") || enabled("middle_dU")) {
        for (std::size_t k : mid) {
            const double X = (g.x(k) - mod.xi) / tb;
            const double w = 1.0 + X * X * X * X;
            if (enabled("middle_U")) {
                const double Ut = (u.values()[k] - mod.kappa) * std::pow(theta, -sc.a) - ui_eval(X, 2);
                t["middle_U"].add(std::abs(Ut), th.c_middle_u * std::pow(w, 0.05), X);
            }
            if (enabled("middle_dU") && std::abs(X) <= th.middle_1_max) {
                const double dUt = jet_scale(1) * d1[k] - ui_derivatives(X, 2, 1)[0];
                t["middle_dU"].add(std::abs(dUt), th.c_middle_1 * std::pow(w, -0.2), X);
            }
        }
    }
    if (enabled("far_dU"))
        for (std::size_t k : far) t["far_dU"].add(jet_scale(1) * std::abs(d1[k]), th.c_far_1 * std::exp(-s), g.x(k));
    if (enabled("middle_dnU") || enabled("far_dnU")) {
        for (int order = 2; order <= 8; ++order) {
            const RealVec dk = inverse_normalized(derivative_coeffs(c, g, order), n);
            const double mpow = std::pow(th.c_middle_n, order * order / 64.0);
            const double fpow = 2.0 * std::pow(th.c_far_n, order * order / 64.0);
            if (enabled("middle_dnU"))
                for (std::size_t k : mid) {
                    const double X = (g.x(k) - mod.xi) / tb;
                    t["middle_dnU"].add(jet_scale(order) * std::abs(dk[k]),
                                        mpow * std::pow(1.0 + X * X * X * X, -0.2), X);
                }
            if (enabled("far_dnU"))
                for (std::size_t k : far) t["far_dnU"].add(jet_scale(order) * std::abs(dk[k]), fpow * std::exp(-s), g.x(k));
        }
    }
    if (enabled("L2_dU")) {
        double sum = 0.0;
        for (double v : d1) sum += v * v;
        const double norm = std::pow(theta, 0.5 * sc.b - sc.a) * std::sqrt(sum * g.spacing());
        t["L2_dU"].add(norm, th.l2_bound, s);
        t["L2_dU"].v.hard = true;
    }
    if (enabled("u_Linf")) t["u_Linf"].add(max_abs(u), th.c_u_inf, s);

    BootstrapVerdicts out;
    for (auto& [id, tally] : t) out[id] = tally.v;
    return out;
}

void merge_verdicts(BootstrapVerdicts& into, const BootstrapVerdicts& more) {
    for (const auto& [id, v] : more) {
        auto it = into.find(id);
        if (it == into.end()) {
            into[id] = v;
            continue;
        }
        auto& w = it->second;
        if (v.evaluated && (w.evaluated == 0 || v.worst_margin < w.worst_margin)) {
            w.worst_margin = v.worst_margin;
            w.worst_at = v.worst_at;
        }
        w.evaluated += v.evaluated;
        w.passed += v.passed;
        w.hard = w.hard || v.hard;
    }
}

RunReport build_report(const Trajectory& tr, const DiagnosticsConfig& cfg, int family) {
    if (tr.records.empty()) fail(ErrorCode::InvalidArgument, "empty trajectory");
    RunReport r;
    const FrameScaling sc = FrameScaling::for_family(family);
    r.blowup = blowup_estimate(tr);
    r.T_star = r.blowup.T_star;
    r.x_star = r.blowup.x_star;
    r.gradient_rate_band = gradient_rate_monitor(tr, r.T_star);

    const auto& last = tr.records.back();
    r.window = cfg.window.value_or(ReportWindow{tr.records.front().s, last.s});
    const double dt_total = last.t - tr.t0;
    if (dt_total > 0.0 && tr.l2_initial > 0.0) r.l2_drift = std::abs(last.l2 - tr.l2_initial) / tr.l2_initial / dt_total;

    // The final field sits at t_f < T*, where the cusp is still centered on xi(t_f) with
    // u(xi) = kappa; the extrapolated x* is off by xi(T*) - xi(t_f), which is a sizable
    // fraction of the inner scale and skews the two one-sided slopes.
    const bool framed = last.mod.theta() > 0.0;
    r.holder_center = framed ? last.mod.xi : r.x_star;
    const double r_min = cfg.holder_r_min > 0.0 ? cfg.holder_r_min
                                                : 8.0 * std::pow(framed ? last.mod.theta() : 1.0 / last.max_slope, sc.b);
    try {
        r.holder = holder_fit(tr.final_field, r.holder_center, r_min, cfg.holder_r_max);
    } catch (const Error& e) {
        r.holder_error = e.what();
    }

    if (family == 2) {
        std::vector<std::pair<double, double>> j2, j3;
        std::vector<OriginSample> origin;
        for (const auto& rec : tr.records) {
            if (rec.s < r.window.s_lo - 1e-12 || rec.s > r.window.s_hi + 1e-12) continue;
            j2.emplace_back(rec.s, rec.jet[2]);
            j3.emplace_back(rec.s, rec.jet[3]);
            if (origin.empty() || rec.s > origin.back().s) origin.push_back(origin_sample(rec));
        }
        const auto e2 = sup_envelope(j2, r.window.s_lo, r.window.s_hi, cfg.decay_bin);
        const auto e3 = sup_envelope(j3, r.window.s_lo, r.window.s_hi, cfg.decay_bin);
        if (e2.size() >= 6) r.decay_fits["d2U_origin"] = fit_decay(e2);
        if (e3.size() >= 6) r.decay_fits["d3U_origin"] = fit_decay(e3);
        if (origin.size() >= 3) r.origin_residuals = origin_ode_check(origin);

        std::vector<SelfSimilarFrame> frames;
        for (const auto& f : tr.frames)
            if (f.s >= r.window.s_lo - 1e-12 && f.s <= r.window.s_hi + 1e-12) frames.push_back(f);
        if (frames.size() >= 3 && frames.back().s - frames.front().s >= 1.0) {
            const auto pc = profile_convergence(frames, cfg.profile_range);
            r.nu_estimate = pc.nu_hat;
            r.profile_errors = pc.series;
            r.profile_tail_decreasing = strictly_decreasing_tail(pc, 0.5 * (r.window.s_lo + r.window.s_hi));
        } else {
            r.nu_estimate = last.jet[5];
        }

        for (std::size_t i = 0; i < tr.snapshots.size(); ++i) {
            const auto& rec = tr.records[tr.snapshot_records[i]];
            if (rec.s > r.window.s_hi + 1e-12) continue;
            merge_verdicts(r.bootstrap, bootstrap_monitor(tr.snapshots[i], rec.mod, cfg.bootstrap));
        }
        merge_verdicts(r.bootstrap, bootstrap_monitor(tr.final_field, last.mod, cfg.bootstrap));
    }
    return r;
}

nlohmann::json to_json(const BootstrapVerdicts& v) {
    nlohmann::json j = nlohmann::json::object();
    for (const auto& [id, b] : v)
        j[id] = {{"evaluated", b.evaluated}, {"passed", b.passed},     {"pass_rate", b.pass_rate()},
                 {"worst_margin", b.worst_margin}, {"worst_at", b.worst_at}, {"hard", b.hard}};
    return j;
}

nlohmann::json to_json(const RunReport& r) {
    nlohmann::json j;
    j["T_star"] = r.T_star;
    j["x_star"] = r.x_star;
    j["blowup_fit"] = {{"n_used", r.blowup.n_used},
                       {"theta_first", r.blowup.theta_first},
                       {"theta_last", r.blowup.theta_last},
                       {"tau_slope", r.blowup.tau_slope}};
    if (r.holder_error)
        j["holder_exponent"] = {{"value", nullptr}, {"error", *r.holder_error}, {"center", r.holder_center}};
    else
        j["holder_exponent"] = {{"value", r.holder.exponent},
                                {"stderr", r.holder.stderr_},
                                {"center", r.holder_center},
                                {"r_min", r.holder.r_min},
                                {"r_max", r.holder.r_max},
                                {"n_radii", r.holder.n_radii}};
    j["gradient_rate_band"] = {r.gradient_rate_band.first, r.gradient_rate_band.second};
    j["decay_fits"] = nlohmann::json::object();
    for (const auto& [k, f] : r.decay_fits) j["decay_fits"][k] = {{"rate", f.rate}, {"stderr", f.stderr_}, {"n", f.n}};
    j["nu_estimate"] = r.nu_estimate;
    j["profile_errors"] = nlohmann::json::array();
    for (const auto& p : r.profile_errors) j["profile_errors"].push_back({p.s, p.error});
    j["profile_tail_decreasing"] = r.profile_tail_decreasing;
    j["bootstrap_verdicts"] = to_json(r.bootstrap);
    double o2 = 0, o3 = 0, o5 = 0;
    for (const auto& o : r.origin_residuals) {
        o2 = std::max(o2, std::abs(o.r2));
        o3 = std::max(o3, std::abs(o.r3));
        o5 = std::max(o5, std::abs(o.r5));
    }
    j["origin_ode_max_residual"] = {{"d2", o2}, {"d3", o3}, {"d5", o5}, {"samples", r.origin_residuals.size()}};
    j["window"] = {r.window.s_lo, r.window.s_hi};
    j["l2_relative_drift_per_time"] = r.l2_drift;
    j["config"] = r.config;
    return j;
}

void write_plot_csvs(const RunReport& r, const Trajectory& tr, const std::string& dir) {
    std::filesystem::create_directories(dir);
    auto open = [&](const std::string& name) {
        std::ofstream f(std::filesystem::path(dir) / name);
        if (!f) fail(ErrorCode::IoError, "cannot write " + name);
        f.precision(17);
        return f;
    };
    {
        auto f = open("d2U_origin.csv");
        f << "s,abs_d2U\n";
        for (const auto& rec : tr.records) f << rec.s << ',' << std::abs(rec.jet[2]) << '\n';
    }
    {
        auto f = open("d3U_origin.csv");
        f << "s,abs_d3U\n";
        for (const auto& rec : tr.records) f << rec.s << ',' << std::abs(rec.jet[3]) << '\n';
    }
    {
        auto f = open("holder.csv");
        f << "log_r,log_du\n";
        for (const auto& [a, b] : r.holder.samples) f << a << ',' << b << '\n';
    }
    {
        auto f = open("profile_error.csv");
        f << "s,error\n";
        for (const auto& p : r.profile_errors) f << p.s << ',' << p.error << '\n';
    }
}

}  // namespace bhlab
