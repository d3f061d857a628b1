#include "bhlab/shooting.hpp"

#include <algorithm>
#include <future>
#include <limits>

#include "bhlab/error.hpp"
#include "bhlab/numerics.hpp"

namespace bhlab {

JacobianMode parse_jacobian_mode(const std::string& name) {
    if (name == "variational") return JacobianMode::Variational;
    if (name == "fd" || name == "finite_difference") return JacobianMode::FiniteDifference;
    if (name == "both") return JacobianMode::Both;
    fail(ErrorCode::ConfigError, "unknown jacobian mode '" + name + "' (variational|fd|both)");
}

std::string to_string(JacobianMode m) {
    switch (m) {
        case JacobianMode::Variational: return "variational";
        case JacobianMode::FiniteDifference: return "fd";
        case JacobianMode::Both: return "both";
    }
    return "?";
}

void ShootConfig::validate() const {
    if (!(epsilon > 0.0 && epsilon < 1.0)) fail(ErrorCode::InvalidArgument, "epsilon must lie in (0, 1)");
    if (n_checkpoints < 1) fail(ErrorCode::InvalidArgument, "n_checkpoints must be >= 1");
    if (!(checkpoint_spacing > 0.0)) fail(ErrorCode::InvalidArgument, "checkpoint_spacing must be positive");
    if (!(newton_tol > 0.0)) fail(ErrorCode::InvalidArgument, "newton_tol must be positive");
    if (max_newton_iters < 1) fail(ErrorCode::InvalidArgument, "max_newton_iters must be >= 1");
    if (!(fd_step >= 1e-6 && fd_step <= 1e-2)) fail(ErrorCode::InvalidArgument, "fd_step must lie in [1e-6, 1e-2]");
    if (trust_radius_alpha < 0.0 || trust_radius_beta < 0.0 || !(trust_c_alpha > 0.0) || !(trust_c_beta > 0.0))
        fail(ErrorCode::InvalidArgument, "trust radii must be positive");
    if (jobs < 1) fail(ErrorCode::InvalidArgument, "jobs must be >= 1");
    if (!(domain_half_width >= 4.0)) fail(ErrorCode::InvalidArgument, "domain_half_width must be >= 4 (support radius 1)");
    if (!(approach_window > 0.0)) fail(ErrorCode::InvalidArgument, "approach_window must be positive");
}

double det2(const Mat2& m) { return m[0][0] * m[1][1] - m[0][1] * m[1][0]; }

std::array<double, 3> jet_sensitivity(const PointJet& u, const PointJet& v, const FrameScaling& sc) {
    const int q = sc.constraint_order;
    const double dxi = -v.d[q] / u.d[q + 1];
    auto dg = [&](int n) { return v.d[n] + u.d[n + 1] * dxi; };
    const double theta = -1.0 / u.d[1];
    const double dtheta = dg(1) / (u.d[1] * u.d[1]);
    auto djet = [&](int n) {
        const double p = sc.jet_exponent(n);
        return p * std::pow(theta, p - 1.0) * dtheta * u.d[n] + std::pow(theta, p) * dg(n);
    };
    return {djet(2), djet(3), -dtheta / theta};
}

namespace {

std::vector<double> lagrange_weights(const std::vector<double>& nodes, double t) {
    std::vector<double> w(nodes.size(), 1.0);
    for (std::size_t i = 0; i < nodes.size(); ++i)
        for (std::size_t j = 0; j < nodes.size(); ++j)
            if (j != i) w[i] *= (t - nodes[j]) / (nodes[i] - nodes[j]);
    return w;
}

struct Node {
    double t, s, j2, j3;
    std::array<std::array<double, 3>, 2> sens{};  // per parameter: dJ2, dJ3, ds
};

}  // namespace

struct ShootProblem::Entry {
    double alpha = 0, beta = 0;
    bool tangents = false;
    std::unique_ptr<Solver> solver;
    std::optional<double> hint;
    double last_s = -std::numeric_limits<double>::infinity();
    std::map<double, ResidualValue> done;
    std::size_t last_use = 0;
};

ShootProblem::ShootProblem(const ShootConfig& cfg) : cfg_(cfg) {
    cfg_.validate();
    cfg_.init.epsilon = cfg_.epsilon;
    ecfg_ = cfg_.evolve;
    ecfg_.family = 2;
    grid_ = Grid1D::make(-cfg_.domain_half_width, cfg_.domain_half_width, cfg_.n_points);
}

ShootProblem::~ShootProblem() = default;

Field ShootProblem::datum(double alpha, double beta) const {
    InitConfig ic = cfg_.init;
    ic.alpha = alpha;
    ic.beta = beta;
    return build_initial_physical(ic, grid_);
}

std::pair<double, double> ShootProblem::trust_radii(int n) const {
    const double eps = cfg_.epsilon;
    const double ra = cfg_.trust_radius_alpha > 0.0
                          ? cfg_.trust_radius_alpha
                          : cfg_.trust_c_alpha * eps * std::exp(-1.75 * n) + std::pow(eps, 1.2) * std::exp(-1.5 * n);
    const double rb =
        cfg_.trust_radius_beta > 0.0 ? cfg_.trust_radius_beta : cfg_.trust_c_beta * eps * std::exp(-1.5 * n);
    return {ra, rb};
}

void ShootProblem::freeze_schedule(double alpha, double beta, double s_end) {
    std::lock_guard lock(mu_);
    Field u0 = datum(alpha, beta);
    EvolveConfig c = cfg_.evolve;
    c.family = 2;
    c.refine_times.clear();
    // fixed CFL speed for every probe, with headroom for parameter changes
    c.speed_bound = c.speed_bound > 0.0 ? c.speed_bound : 1.5 * std::max(1.0, max_abs(u0));
    c.s_max = s_end;
    c.t_max = std::numeric_limits<double>::infinity();
    c.frame_points = 0;
    c.snapshot_ds = 0.0;
    Trajectory tr = run(u0, t0(), c);
    ++runs_;
    ecfg_ = c;
    ecfg_.refine_times = tr.refine_times;
    ecfg_.s_max = std::numeric_limits<double>::infinity();
    frozen_ = true;
    frozen_end_ = s_end;
    base_ = {alpha, beta};
    cache_.clear();
}

void ShootProblem::ensure_schedule(double s_target, double alpha, double beta) {
    if (frozen_ && s_target + 0.1 <= frozen_end_) return;
    const double s_end = std::max(s_target, checkpoint(cfg_.n_checkpoints)) + 0.25;
    if (frozen_)
        freeze_schedule(base_.first, base_.second, s_end);
    else
        freeze_schedule(alpha, beta, s_end);
}

std::unique_ptr<ShootProblem::Entry> ShootProblem::start(double alpha, double beta, bool tangents) {
    auto e = std::make_unique<Entry>();
    e->alpha = alpha;
    e->beta = beta;
    e->tangents = tangents;
    InitConfig ic = cfg_.init;
    std::vector<Field> tv;
    if (tangents) tv = {initial_tangent_alpha(ic, grid_), initial_tangent_beta(ic, grid_)};
    e->solver = std::make_unique<Solver>(datum(alpha, beta), t0(), ecfg_, tv);
    Extraction ex = extract_from_spectrum(e->solver->coeffs(), e->solver->grid(), e->solver->time(), std::nullopt,
                                          FrameScaling::for_family(2), ecfg_.xi_window);
    e->hint = ex.mod.xi;
    e->last_s = ex.s;
    return e;
}

ResidualValue ShootProblem::advance(Entry& e, double s_target) {
    if (auto it = e.done.find(s_target); it != e.done.end()) return it->second;
    const FrameScaling sc = FrameScaling::for_family(2);
    Solver& sol = *e.solver;
    std::vector<Node> ring;
    bool approach = false;
    int since = 0;
    for (;;) {
        sol.step();
        ++since;
        if (!approach && since < ecfg_.output_every) continue;
        since = 0;
        Extraction ex = extract_from_spectrum(sol.coeffs(), sol.grid(), sol.time(), e.hint, sc, ecfg_.xi_window);
        e.hint = ex.mod.xi;
        if (!(ex.s > e.last_s))
            fail(ErrorCode::DegenerateModulation, "s stopped increasing at t=" + std::to_string(sol.time()));
        e.last_s = ex.s;
        if (std::abs(ex.physical.d[1]) >= ecfg_.stop_slope)
            fail(ErrorCode::TargetBeyondBlowup, "stop_slope reached before s=" + std::to_string(s_target));
        if (!approach) {
            if (ex.s <= s_target - cfg_.approach_window) continue;
            if (ex.s > s_target)
                fail(ErrorCode::InvalidArgument, "approach_window too small for the extraction cadence");
            approach = true;
        }
        Node nd{sol.time(), ex.s, ex.jet[2], ex.jet[3], {}};
        if (e.tangents)
            for (std::size_t k = 0; k < 2; ++k) {
                PointJet vj = eval_point(sol.tangent_coeffs(k), sol.grid(), ex.mod.xi, 5);
                nd.sens[k] = jet_sensitivity(ex.physical, vj, sc);
            }
        ring.push_back(nd);
        if (ring.size() > 4) ring.erase(ring.begin());
        if (ring.size() == 4 && ring[1].s <= s_target && ring[2].s > s_target) break;
    }

    std::vector<double> ts, ss, r2s, r3s;
    for (const auto& nd : ring) {
        ts.push_back(nd.t);
        ss.push_back(nd.s);
        r2s.push_back(nd.j2);
        r3s.push_back(nd.j3);
    }
    // invert s(t) on the cubic through the nodes
    double tl = ts[1], tr = ts[2];
    double t = tl + (s_target - ss[1]) / (ss[2] - ss[1]) * (tr - tl);
    for (int it = 0; it < 30; ++it) {
        const double f = lagrange_eval(ts, ss, t) - s_target;
        const double d = lagrange_deriv(ts, ss, t);
        const double nt = std::clamp(t - f / d, tl, tr);
        if (std::abs(nt - t) <= 1e-16 * std::abs(t) + 1e-300) {
            t = nt;
            break;
        }
        t = nt;
    }
    const auto w = lagrange_weights(ts, t);
    ResidualValue rv;
    rv.t = t;
    for (std::size_t i = 0; i < 4; ++i) {
        rv.r2 += w[i] * r2s[i];
        rv.r3 += w[i] * r3s[i];
    }
    if (e.tangents) {
        const double sp = lagrange_deriv(ts, ss, t);
        const double r2p = lagrange_deriv(ts, r2s, t);
        const double r3p = lagrange_deriv(ts, r3s, t);
        Mat2 J{};
        for (std::size_t k = 0; k < 2; ++k) {
            double d2 = 0, d3 = 0, ds = 0;
            for (std::size_t i = 0; i < 4; ++i) {
                d2 += w[i] * ring[i].sens[k][0];
                d3 += w[i] * ring[i].sens[k][1];
                ds += w[i] * ring[i].sens[k][2];
            }
            const double dt = -ds / sp;  // shift of the crossing time
            J[0][k] = d2 + r2p * dt;
            J[1][k] = d3 + r3p * dt;
        }
        rv.jacobian = J;
    }
    e.done[s_target] = rv;
    return rv;
}

ResidualValue ShootProblem::evaluate(double alpha, double beta, double s_target, bool with_jacobian) {
    if (std::abs(s_target - s0()) <= 1e-12 * std::max(1.0, s0())) {
        // no evolution: the origin jet of the datum is linear in (alpha, beta)
        ResidualValue rv;
        rv.t = t0();
        rv.r2 = 2.0 * alpha + uhat_d2_origin(cfg_.init);
        rv.r3 = 6.0 * beta + uhat_d3_origin(cfg_.init);
        if (with_jacobian) rv.jacobian = Mat2{{{2.0, 0.0}, {0.0, 6.0}}};
        return rv;
    }
    if (s_target < s0()) fail(ErrorCode::InvalidArgument, "s_target precedes the initial time");
    ensure_schedule(s_target, alpha, beta);

    std::lock_guard lock(mu_);
    ++clock_;
    Entry* hit = nullptr;
    for (auto& e : cache_) {
        if (e->alpha != alpha || e->beta != beta) continue;
        if (with_jacobian && !e->tangents) continue;
        if (!e->done.count(s_target) && e->last_s >= s_target - cfg_.approach_window) continue;
        hit = e.get();
        break;
    }
    if (!hit) {
        auto fresh = start(alpha, beta, with_jacobian);
        ++runs_;
        if (cache_.size() >= kCacheSize) {
            auto oldest = std::min_element(cache_.begin(), cache_.end(),
                                           [](const auto& a, const auto& b) { return a->last_use < b->last_use; });
            cache_.erase(oldest);
        }
        cache_.push_back(std::move(fresh));
        hit = cache_.back().get();
    }
    hit->last_use = clock_;
    return advance(*hit, s_target);
}

Mat2 ShootProblem::finite_difference(double alpha, double beta, double s_target) {
    if (std::abs(s_target - s0()) <= 1e-12 * std::max(1.0, s0())) return Mat2{{{2.0, 0.0}, {0.0, 6.0}}};
    ensure_schedule(s_target, alpha, beta);
    const double h = cfg_.fd_step;
    const std::array<std::pair<double, double>, 4> pts{
        {{alpha + h, beta}, {alpha - h, beta}, {alpha, beta + h}, {alpha, beta - h}}};
    auto probe = [&](std::size_t i) {
        std::unique_ptr<Entry> e;
        {
            std::lock_guard lock(mu_);
            e = start(pts[i].first, pts[i].second, false);
            ++runs_;
        }
        return advance(*e, s_target);
    };
    std::array<ResidualValue, 4> r;
    if (cfg_.jobs > 1) {
        std::size_t i = 0;
        while (i < 4) {
            std::vector<std::future<ResidualValue>> fs;
            for (int j = 0; j < cfg_.jobs && i < 4; ++j, ++i) fs.push_back(std::async(std::launch::async, probe, i));
            const std::size_t first = i - fs.size();
            for (std::size_t j = 0; j < fs.size(); ++j) r[first + j] = fs[j].get();
        }
    } else {
        for (std::size_t i = 0; i < 4; ++i) r[i] = probe(i);
    }
    Mat2 J;
    J[0][0] = (r[0].r2 - r[1].r2) / (2 * h);
    J[1][0] = (r[0].r3 - r[1].r3) / (2 * h);
    J[0][1] = (r[2].r2 - r[3].r2) / (2 * h);
    J[1][1] = (r[2].r3 - r[3].r3) / (2 * h);
    return J;
}

namespace {

double max_rel_diff(const Mat2& a, const Mat2& b) {
    double scale = 0.0;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) scale = std::max(scale, std::abs(b[i][j]));
    double worst = 0.0;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
            // tiny off-diagonal entries are compared against the matrix scale
            const double ref = std::max(std::abs(b[i][j]), 1e-3 * scale);
            worst = std::max(worst, std::abs(a[i][j] - b[i][j]) / ref);
        }
    return worst;
}

void check_singular(const Mat2& J) {
    double n2 = 0.0;
    for (const auto& row : J)
        for (double v : row) n2 += v * v;
    if (!(std::abs(det2(J)) >= 1e-12 * n2))
        fail(ErrorCode::SingularJacobian, "|det J| = " + std::to_string(std::abs(det2(J))));
}

}  // namespace

std::pair<double, double> residual(ShootProblem& prob, double alpha, double beta, double s_target) {
    auto rv = prob.evaluate(alpha, beta, s_target, false);
    return {rv.r2, rv.r3};
}

Mat2 jacobian(ShootProblem& prob, double alpha, double beta, double s_target, JacobianMode mode,
              double* disagreement) {
    Mat2 J{};
    if (mode == JacobianMode::FiniteDifference) {
        J = prob.finite_difference(alpha, beta, s_target);
    } else {
        J = *prob.evaluate(alpha, beta, s_target, true).jacobian;
        if (mode == JacobianMode::Both) {
            const Mat2 F = prob.finite_difference(alpha, beta, s_target);
            const double d = max_rel_diff(J, F);
            if (disagreement) *disagreement = d;
            if (d > prob.config().fd_tolerance)
                fail(ErrorCode::JacobianDisagreement,
                     "variational and finite-difference Jacobians differ by " + std::to_string(100 * d) + "%");
        }
    }
    check_singular(J);
    return J;
}

NewtonResult newton_solve(ShootProblem& prob, double alpha0, double beta0, double s_target, int checkpoint_index) {
    const auto& cfg = prob.config();
    const auto [ra, rb] = prob.trust_radii(checkpoint_index);
    const bool variational = cfg.jacobian_mode != JacobianMode::FiniteDifference;
    NewtonResult res;
    double a = alpha0, b = beta0;
    for (int k = 0;; ++k) {
        ResidualValue rv = prob.evaluate(a, b, s_target, variational);
        const double rn = std::hypot(rv.r2, rv.r3);
        if (!std::isfinite(rn)) fail(ErrorCode::NonFiniteState, "non-finite shooting residual");
        if (!res.residual_norms.empty()) {
            const double prev = res.residual_norms.back();
            res.error_ratios.push_back(rn / (prev * prev));
        }
        res.residual_norms.push_back(rn);
        res.alpha = a;
        res.beta = b;
        res.r2 = rv.r2;
        res.r3 = rv.r3;
        res.iters = k;
        Mat2 J = variational ? *rv.jacobian : prob.finite_difference(a, b, s_target);
        if (cfg.jacobian_mode == JacobianMode::Both) {
            const Mat2 F = prob.finite_difference(a, b, s_target);
            const double d = max_rel_diff(J, F);
            if (d > cfg.fd_tolerance)
                fail(ErrorCode::JacobianDisagreement,
                     "variational and finite-difference Jacobians differ by " + std::to_string(100 * d) + "%");
        }
        res.jacobian = J;
        if (rn <= cfg.newton_tol) return res;
        if (k >= cfg.max_newton_iters)
            fail(ErrorCode::MaxItersExceeded, "Newton did not reach tol at s=" + std::to_string(s_target) +
                                                  " (|r|=" + std::to_string(rn) + ")");
        check_singular(J);
        const double det = det2(J);
        double da = -(J[1][1] * rv.r2 - J[0][1] * rv.r3) / det;
        double db = -(-J[1][0] * rv.r2 + J[0][0] * rv.r3) / det;
        double scale = 1.0;
        if (std::abs(da) > ra) scale = std::min(scale, ra / std::abs(da));
        if (std::abs(db) > rb) scale = std::min(scale, rb / std::abs(db));
        a += scale * da;
        b += scale * db;
    }
}

ShootTrace shoot_sequence(const ShootConfig& cfg, const CheckpointObserver& on_checkpoint) {
    ShootProblem prob(cfg);
    return shoot_sequence(prob, on_checkpoint);
}

ShootTrace shoot_sequence(ShootProblem& prob, const CheckpointObserver& on_checkpoint) {
    const auto& cfg = prob.config();
    ShootTrace trace;
    double a = -0.5 * uhat_d2_origin(cfg.init);
    double b = -uhat_d3_origin(cfg.init) / 6.0;
    prob.freeze_schedule(a, b, prob.checkpoint(cfg.n_checkpoints) + 0.25);

    ShootCheckpoint c0;
    c0.n = 0;
    c0.s = prob.s0();
    c0.alpha = a;
    c0.beta = b;
    const auto r0 = prob.evaluate(a, b, c0.s, true);
    c0.r2 = r0.r2;
    c0.r3 = r0.r3;
    c0.jacobian = *r0.jacobian;
    c0.det = det2(c0.jacobian);
    c0.residual_norms = {std::hypot(r0.r2, r0.r3)};
    trace.checkpoints.push_back(c0);
    if (on_checkpoint) on_checkpoint(c0);

    for (int n = 0; n < cfg.n_checkpoints; ++n) {
        const double s = prob.checkpoint(n + 1);
        NewtonResult nr = newton_solve(prob, a, b, s, n);
        ShootCheckpoint c;
        c.n = n + 1;
        c.s = s;
        c.alpha = nr.alpha;
        c.beta = nr.beta;
        c.r2 = nr.r2;
        c.r3 = nr.r3;
        c.jacobian = nr.jacobian;
        c.det = det2(nr.jacobian);
        c.newton_iters = nr.iters;
        c.step_alpha = nr.alpha - a;
        c.step_beta = nr.beta - b;
        c.step_norm = std::hypot(c.step_alpha, c.step_beta);
        std::tie(c.trust_alpha, c.trust_beta) = prob.trust_radii(n);
        c.residual_norms = nr.residual_norms;
        c.error_ratios = nr.error_ratios;
        if (std::abs(c.step_alpha) > c.trust_alpha * (1 + 1e-12) || std::abs(c.step_beta) > c.trust_beta * (1 + 1e-12))
            fail(ErrorCode::TrustRegionExceeded, "accepted step at checkpoint " + std::to_string(n + 1) +
                                                     " leaves the trust rectangle");
        if (cfg.jacobian_mode == JacobianMode::Variational && n < cfg.fd_check_checkpoints) {
            const Mat2 F = prob.finite_difference(c.alpha, c.beta, s);
            c.fd_disagreement = max_rel_diff(c.jacobian, F);
            if (c.fd_disagreement > cfg.fd_tolerance)
                fail(ErrorCode::JacobianDisagreement, "variational and finite-difference Jacobians differ by " +
                                                          std::to_string(100 * c.fd_disagreement) + "% at s=" +
                                                          std::to_string(s));
        }
        trace.checkpoints.push_back(c);
        if (on_checkpoint) on_checkpoint(c);
        a = nr.alpha;
        b = nr.beta;
    }
    trace.alpha_star = a;
    trace.beta_star = b;
    trace.refine_times = prob.schedule();
    trace.speed_bound = prob.speed_bound();
    trace.runs = prob.runs();
    return trace;
}

}  // namespace bhlab
