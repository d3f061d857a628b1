#include "bhlab/evolve.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "bhlab/error.hpp"

namespace bhlab {

std::string to_string(StopReason r) {
    switch (r) {
        case StopReason::StopSlope: return "stop_slope";
        case StopReason::TMax: return "t_max";
        case StopReason::SMax: return "s_max";
        case StopReason::Callback: return "callback";
    }
    return "?";
}

namespace {

void validate(const EvolveConfig& cfg) {
    if (!(cfg.cfl > 0.0 && cfg.cfl <= 0.5)) fail(ErrorCode::InvalidArgument, "cfl must lie in (0, 0.5]");
    if (cfg.output_every < 1) fail(ErrorCode::InvalidArgument, "output_every must be positive");
    if (!is_power_of_two(cfg.max_points)) fail(ErrorCode::InvalidArgument, "max_points must be a power of two");
    if (!(cfg.points_per_scale > 0.0)) fail(ErrorCode::InvalidArgument, "points_per_scale must be positive");
    if (cfg.hilbert.kind == HilbertKind::PaddedLine && cfg.hilbert.pad_factor < 2)
        fail(ErrorCode::InvalidArgument, "pad_factor must be >= 2");
}

}  // namespace

Solver::Solver(const Field& u0, double t0, const EvolveConfig& cfg, const std::vector<Field>& tangents)
    : cfg_(cfg), grid_(u0.grid()), t_(t0) {
    validate(cfg_);
    u_ = forward_normalized(u0.values().data(), grid_.n_points);
    apply_mask(u_);
    for (const auto& v : tangents) {
        if (!(v.grid() == grid_)) fail(ErrorCode::InvalidArgument, "tangent grid differs from state grid");
        v_.push_back(forward_normalized(v.values().data(), grid_.n_points));
        apply_mask(v_.back());
    }
    if (cfg_.speed_bound > 0.0) {
        speed_ = cfg_.speed_bound;
    } else if (cfg_.model == EquationModel::LinearAdvection) {
        speed_ = std::max(1.0, std::abs(cfg_.advection_speed));
    } else {
        speed_ = 1.25 * std::max(1.0, max_abs(u0));
    }
    plan_ = FftPlan::get(grid_.n_points);
    resize_buffers();
    dt_ = cfg_.cfl * grid_.spacing() / speed_;
    last_max_u_ = max_abs(u0);
}

void Solver::resize_buffers() {
    const std::size_t n = grid_.n_points, m = n / 2 + 1;
    cy_.assign(m, 0.0);
    ck_.assign(m, 0.0);
    cacc_.assign(m, 0.0);
    cwork_.assign(m, 0.0);
    ustage_.assign(n, 0.0);
    rwork_.assign(n, 0.0);
    vphys_.assign(n, 0.0);
    vy_.assign(v_.size(), ComplexVec(m, 0.0));
    vk_.assign(v_.size(), ComplexVec(m, 0.0));
    vacc_.assign(v_.size(), ComplexVec(m, 0.0));
}

void Solver::apply_mask(ComplexVec& c) const {
    const std::size_t n = grid_.n_points;
    const std::size_t keep = cfg_.dealias ? dealias_cutoff(n) : n / 2;
    for (std::size_t j = keep + 1; j < c.size(); ++j) c[j] = 0.0;
}

void Solver::hilbert_add(const ComplexVec& y, const RealVec* phys, ComplexVec& out) {
    if (!cfg_.hilbert_enabled) return;
    const std::size_t n = grid_.n_points;
    if (cfg_.hilbert.kind == HilbertKind::SpectralPeriodic) {
        for (std::size_t j = 1; j < n / 2; ++j) out[j] += cplx(y[j].imag(), -y[j].real());
        return;
    }
    Field f(grid_, std::vector<double>(phys->begin(), phys->end()));
    Field hf = apply_hilbert(f, cfg_.hilbert);
    ComplexVec hc = forward_normalized(hf.values().data(), n);
    for (std::size_t j = 0; j < out.size(); ++j) out[j] += hc[j];
}

void Solver::rhs(const ComplexVec& y, ComplexVec& out, bool /*keep_u*/) {
    const std::size_t n = grid_.n_points;
    std::copy(y.begin(), y.end(), cwork_.begin());
    plan_->inverse(cwork_.data(), ustage_.data());
    if (cfg_.model == EquationModel::BurgersHilbert) {
        // u u_x = (u^2/2)_x; exact projection of the product for 2/3-dealiased u
        for (std::size_t k = 0; k < n; ++k) rwork_[k] = ustage_[k] * ustage_[k];
        plan_->forward(rwork_.data(), cwork_.data());
        const double scale = 0.5 / static_cast<double>(n);
        for (std::size_t j = 0; j < out.size(); ++j) {
            const double k = grid_.wavenumber(j) * scale;
            out[j] = cplx(k * cwork_[j].imag(), -k * cwork_[j].real());  // -i k w / (2n)
        }
    } else {
        const double c = cfg_.advection_speed;
        for (std::size_t j = 0; j < out.size(); ++j) {
            const double k = c * grid_.wavenumber(j);
            out[j] = cplx(k * y[j].imag(), -k * y[j].real());
        }
    }
    out[n / 2] = 0.0;
    hilbert_add(y, &ustage_, out);
    apply_mask(out);
}

void Solver::tangent_rhs(const ComplexVec& y, ComplexVec& out) {
    const std::size_t n = grid_.n_points;
    const bool need_phys = cfg_.model == EquationModel::BurgersHilbert ||
                           (cfg_.hilbert_enabled && cfg_.hilbert.kind != HilbertKind::SpectralPeriodic);
    if (need_phys) {
        std::copy(y.begin(), y.end(), cwork_.begin());
        plan_->inverse(cwork_.data(), vphys_.data());
    }
    if (cfg_.model == EquationModel::BurgersHilbert) {
        // linearization of (u^2/2)_x is (u v)_x
        for (std::size_t k = 0; k < n; ++k) rwork_[k] = ustage_[k] * vphys_[k];
        plan_->forward(rwork_.data(), cwork_.data());
        const double scale = 1.0 / static_cast<double>(n);
        for (std::size_t j = 0; j < out.size(); ++j) {
            const double k = grid_.wavenumber(j) * scale;
            out[j] = cplx(k * cwork_[j].imag(), -k * cwork_[j].real());
        }
    } else {
        const double c = cfg_.advection_speed;
        for (std::size_t j = 0; j < out.size(); ++j) {
            const double k = c * grid_.wavenumber(j);
            out[j] = cplx(k * y[j].imag(), -k * y[j].real());
        }
    }
    out[n / 2] = 0.0;
    hilbert_add(y, &vphys_, out);
    apply_mask(out);
}

void Solver::refine() {
    const std::size_t n = grid_.n_points, n2 = 2 * n;
    auto grow = [&](ComplexVec& c) {
        ComplexVec g(n2 / 2 + 1, 0.0);
        std::copy(c.begin(), c.end(), g.begin());
        g[n / 2] *= 0.5;  // old Nyquist cosine becomes an ordinary mode
        c.swap(g);
    };
    grow(u_);
    for (auto& v : v_) grow(v);
    grid_ = grid_.with_points(n2);
    plan_ = FftPlan::get(n2);
    resize_buffers();
    dt_ = cfg_.cfl * grid_.spacing() / speed_;
    refined_at_.push_back(t_);
}

void Solver::step() {
    const auto& sched = cfg_.refine_times;
    while (next_refine_ < sched.size() && sched[next_refine_] <= t_ + 1e-13 * std::max(1.0, std::abs(t_))) {
        refine();
        ++next_refine_;
    }
    advance(dt_);
}

void Solver::advance(double dt) {
    if (!(dt > 0.0)) fail(ErrorCode::InvalidArgument, "dt must be positive");
    const std::size_t m = u_.size();
    const std::size_t nt = v_.size();

    // stage 1
    rhs(u_, ck_, true);
    double umax = 0.0;
    for (double v : ustage_) umax = std::max(umax, std::abs(v));
    last_max_u_ = umax;
    if (!std::isfinite(umax)) fail(ErrorCode::NonFiniteState, "state became non-finite at t=" + std::to_string(t_));
    const double vmax = cfg_.model == EquationModel::LinearAdvection ? std::abs(cfg_.advection_speed) : umax;
    if (dt * std::max(1.0, vmax) > cfg_.cfl * grid_.spacing() * (1.0 + 1e-12))
        fail(ErrorCode::CflViolation, "||u||_inf = " + std::to_string(vmax) + " exceeds the CFL speed bound " +
                                          std::to_string(speed_));
    for (std::size_t i = 0; i < nt; ++i) tangent_rhs(v_[i], vk_[i]);
    for (std::size_t j = 0; j < m; ++j) {
        cacc_[j] = ck_[j];
        cy_[j] = u_[j] + 0.5 * dt * ck_[j];
    }
    for (std::size_t i = 0; i < nt; ++i)
        for (std::size_t j = 0; j < m; ++j) {
            vacc_[i][j] = vk_[i][j];
            vy_[i][j] = v_[i][j] + 0.5 * dt * vk_[i][j];
        }

    // stages 2 and 3
    for (int stage = 2; stage <= 3; ++stage) {
        const double c = (stage == 2) ? 0.5 * dt : dt;
        rhs(cy_, ck_, true);
        for (std::size_t i = 0; i < nt; ++i) tangent_rhs(vy_[i], vk_[i]);
        for (std::size_t j = 0; j < m; ++j) {
            cacc_[j] += 2.0 * ck_[j];
            cy_[j] = u_[j] + c * ck_[j];
        }
        for (std::size_t i = 0; i < nt; ++i)
            for (std::size_t j = 0; j < m; ++j) {
                vacc_[i][j] += 2.0 * vk_[i][j];
                vy_[i][j] = v_[i][j] + c * vk_[i][j];
            }
    }

    // stage 4
    rhs(cy_, ck_, true);
    for (std::size_t i = 0; i < nt; ++i) tangent_rhs(vy_[i], vk_[i]);
    const double w = dt / 6.0;
    for (std::size_t j = 0; j < m; ++j) u_[j] += w * (cacc_[j] + ck_[j]);
    for (std::size_t i = 0; i < nt; ++i)
        for (std::size_t j = 0; j < m; ++j) v_[i][j] += w * (vacc_[i][j] + vk_[i][j]);

    t_ += dt;
    ++steps_;
}

Field Solver::field() const {
    RealVec v = inverse_normalized(u_, grid_.n_points);
    return Field(grid_, std::vector<double>(v.begin(), v.end()), {"u", t_});
}

Field Solver::tangent(std::size_t i) const {
    RealVec v = inverse_normalized(v_.at(i), grid_.n_points);
    return Field(grid_, std::vector<double>(v.begin(), v.end()), {"v" + std::to_string(i), t_});
}

double Solver::l2_norm() const {
    double s = std::norm(u_[0]) + std::norm(u_.back());
    for (std::size_t j = 1; j + 1 < u_.size(); ++j) s += 2.0 * std::norm(u_[j]);
    return std::sqrt(s * grid_.length());
}

double Solver::spectral_tail() const {
    const std::size_t keep = cfg_.dealias ? dealias_cutoff(grid_.n_points) : grid_.n_points / 2;
    double top = 0.0, all = 0.0;
    for (std::size_t j = 1; j <= keep && j < u_.size(); ++j) {
        const double e = std::norm(u_[j]);
        all += e;
        if (4 * j >= 3 * keep) top += e;
    }
    return all > 0.0 ? std::sqrt(top / all) : 0.0;
}

double Solver::max_slope() const {
    ComplexVec c(u_);
    for (std::size_t j = 0; j < c.size(); ++j) c[j] *= cplx(0.0, grid_.wavenumber(j));
    c.back() = 0.0;
    RealVec ux = inverse_normalized(c, grid_.n_points);
    std::size_t kmax = 0;
    double best = 0.0;
    for (std::size_t k = 0; k < ux.size(); ++k)
        if (std::abs(ux[k]) > best) {
            best = std::abs(ux[k]);
            kmax = k;
        }
    // polish the extremum between nodes: Newton on u_xx
    const double h = grid_.spacing();
    double x = grid_.x(kmax);
    const double x0 = x;
    for (int it = 0; it < 8; ++it) {
        PointJet pj = eval_point(u_, grid_, x, 3);
        if (pj.d[3] == 0.0) break;
        const double nx = x - pj.d[2] / pj.d[3];
        if (std::abs(nx - x0) > h) break;
        x = nx;
    }
    return std::max(best, std::abs(eval_point(u_, grid_, x, 1).d[1]));
}

Field Solver::evaluate_rhs() {
    ComplexVec out(u_.size());
    rhs(u_, out, true);
    RealVec v = inverse_normalized(out, grid_.n_points);
    return Field(grid_, std::vector<double>(v.begin(), v.end()), {"rhs", t_});
}

namespace {

void check_interior(const Field& u) {
    const auto& g = u.grid();
    std::size_t first = 0, last = 0;
    if (!support_indices(u, first, last, 1e-12)) return;
    const double q = 0.125 * g.length();
    if (g.x(first) < g.x_min + q || g.x(last) > g.x_max - q)
        fail(ErrorCode::SupportTooWide, "u must be supported away from the periodic boundary");
}

}  // namespace

Field rhs_physical(const Field& u, const EvolveConfig& cfg) {
    check_interior(u);
    Solver s(u, 0.0, cfg);
    return s.evaluate_rhs();
}

Field step(const Field& u, double dt, const EvolveConfig& cfg) {
    Solver s(u, u.meta().time, cfg);
    s.advance(dt);
    return s.field();
}

TangentPair step_tangent(const TangentPair& pair, double dt, const EvolveConfig& cfg) {
    Solver s(pair.u, pair.u.meta().time, cfg, {pair.v_alpha, pair.v_beta});
    s.advance(dt);
    return {s.field(), s.tangent(0), s.tangent(1)};
}

TrajectoryRecord make_record(const Solver& solver, std::optional<double> xi_hint, Extraction* out) {
    const auto& cfg = solver.config();
    TrajectoryRecord rec;
    rec.step = solver.step_count();
    rec.t = solver.time();
    rec.n_points = solver.grid().n_points;
    rec.dt = solver.dt();
    rec.l2 = solver.l2_norm();
    rec.max_slope = solver.max_slope();
    rec.max_abs = solver.max_abs_u();
    rec.spectral_tail = solver.spectral_tail();
    if (!cfg.extract) return rec;

    Extraction ex = extract_from_spectrum(solver.coeffs(), solver.grid(), rec.t, xi_hint,
                                          FrameScaling::for_family(cfg.family), cfg.xi_window);
    rec.mod = ex.mod;
    rec.s = ex.s;
    rec.jet = ex.jet;
    rec.hilbert = ex.hilbert;
    if (cfg.family == 2 && std::abs(ex.jet[5]) >= 10.0) {
        Jet h{};
        if (cfg.hilbert_enabled) h = ex.hilbert;
        const auto r = modulation_rhs(ex.jet, h, ex.s, ex.mod.kappa);
        rec.mod.tau_dot = r.tau_dot;
        rec.mod.xi_dot = r.xi_dot;
        rec.mod.kappa_dot = r.kappa_dot;
    }
    if (out) *out = ex;
    return rec;
}

Trajectory run(const Field& u0, double t0, const EvolveConfig& cfg, const RunObserver& observer) {
    Solver solver(u0, t0, cfg);
    Trajectory tr;
    tr.t0 = t0;
    tr.l2_initial = solver.l2_norm();
    tr.speed_bound = solver.speed_bound();
    const FrameScaling sc = FrameScaling::for_family(cfg.family);
    const bool frames_on = cfg.extract && cfg.frame_points > 0 && cfg.frame_ds > 0.0;
    Grid1D xg;
    if (frames_on) xg = Grid1D::make(-cfg.frame_half_width, cfg.frame_half_width, cfg.frame_points);

    std::optional<double> hint;
    double last_frame_s = -std::numeric_limits<double>::infinity();
    double last_snap_s = -std::numeric_limits<double>::infinity();
    bool stop = false;

    auto output = [&]() {
        TrajectoryRecord rec = make_record(solver, hint);
        if (!std::isfinite(rec.l2)) fail(ErrorCode::NonFiniteState, "state became non-finite");
        if (cfg.extract) {
            hint = rec.mod.xi;
            if (!tr.records.empty() && !(rec.s > tr.records.back().s))
                fail(ErrorCode::DegenerateModulation,
                     "s stopped increasing at t=" + std::to_string(rec.t) + " (tau-t=" +
                         std::to_string(rec.mod.theta()) + ")");
        }
        tr.records.push_back(rec);

        if (frames_on && rec.s >= last_frame_s + cfg.frame_ds) {
            tr.frames.push_back(to_selfsimilar(solver.coeffs(), solver.grid(), rec.t, rec.mod, xg, sc));
            last_frame_s = rec.s;
        }
        if (cfg.snapshot_ds > 0.0 && cfg.extract && rec.s >= last_snap_s + cfg.snapshot_ds) {
            tr.snapshots.push_back(solver.field());
            tr.snapshot_records.push_back(tr.records.size() - 1);
            last_snap_s = rec.s;
        }

        if (cfg.refine_times.empty()) {
            const double theta = (cfg.extract && rec.mod.theta() > 0.0) ? rec.mod.theta()
                                                                        : 1.0 / std::max(rec.max_slope, 1e-300);
            const double want = std::pow(theta, sc.b) / cfg.points_per_scale;
            while (solver.grid().spacing() > want && 2 * solver.grid().n_points <= cfg.max_points)
                solver.refine();
        }

        if (rec.max_slope >= cfg.stop_slope) {
            tr.stop = StopReason::StopSlope;
            stop = true;
        } else if (cfg.extract && rec.s >= cfg.s_max) {
            tr.stop = StopReason::SMax;
            stop = true;
        } else if (observer && !observer(solver, rec)) {
            tr.stop = StopReason::Callback;
            stop = true;
        }
    };

    output();
    while (!stop) {
        solver.step();
        const bool at_end = solver.time() >= cfg.t_max;
        if (at_end || solver.step_count() % static_cast<std::size_t>(cfg.output_every) == 0) output();
        if (!stop && at_end) {
            tr.stop = StopReason::TMax;
            stop = true;
        }
    }
    tr.final_field = solver.field();
    tr.refine_times = solver.refinement_times();
    return tr;
}

}  // namespace bhlab
