#pragma once

#include <array>
#include <cmath>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "bhlab/evolve.hpp"
#include "bhlab/initdata.hpp"

namespace bhlab {

using Mat2 = std::array<std::array<double, 2>, 2>;

enum class JacobianMode { Variational, FiniteDifference, Both };
JacobianMode parse_jacobian_mode(const std::string& name);  // variational | fd | both
std::string to_string(JacobianMode m);

struct ShootConfig {
    double epsilon = 0.1;
    int n_checkpoints = 3;
    double checkpoint_spacing = 1.0;  // s_n = -log eps + n * spacing
    double newton_tol = 1e-8;
    int max_newton_iters = 8;
    JacobianMode jacobian_mode = JacobianMode::Variational;
    double fd_step = 1e-4;
    int fd_check_checkpoints = 2;     // Variational runs cross-check FD on the first few
    double fd_tolerance = 0.05;       // relative disagreement allowed in Both mode
    // Absolute trust radii; 0 selects the shrinking shape
    // c_alpha eps e^{-7n/4} + eps^{6/5} e^{-3n/2} and c_beta eps e^{-3n/2}.
    double trust_radius_alpha = 0.0;
    double trust_radius_beta = 0.0;
    double trust_c_alpha = 1.0;
    double trust_c_beta = 1.0;
    int jobs = 1;                     // parallel probe runs

    InitConfig init;                  // alpha/beta/epsilon are overwritten
    EvolveConfig evolve;
    double domain_half_width = 4.0;
    std::size_t n_points = std::size_t{1} << 14;
    double approach_window = 0.02;    // extract every step within this s-distance of a target

    void validate() const;
};

struct ResidualValue {
    double r2 = 0;
    double r3 = 0;
    double t = 0;                     // physical time of the crossing
    std::optional<Mat2> jacobian;     // variational, when requested
};

struct NewtonResult {
    double alpha = 0;
    double beta = 0;
    int iters = 0;
    double r2 = 0;
    double r3 = 0;
    Mat2 jacobian{};
    std::vector<double> residual_norms;
    std::vector<double> error_ratios;  // e_{k+1} / e_k^2
};

struct ShootCheckpoint {
    int n = 0;
    double s = 0;
    double alpha = 0;
    double beta = 0;
    double r2 = 0;
    double r3 = 0;
    Mat2 jacobian{};
    double det = 0;
    int newton_iters = 0;
    double step_alpha = 0;   // alpha_n - alpha_{n-1}
    double step_beta = 0;
    double step_norm = 0;
    double trust_alpha = 0;
    double trust_beta = 0;
    double fd_disagreement = -1;  // max relative entry difference, -1 when not checked
    std::vector<double> residual_norms;
    std::vector<double> error_ratios;
};

struct ShootTrace {
    std::vector<ShootCheckpoint> checkpoints;  // n = 0 is the initial choice at s_0
    double alpha_star = 0;
    double beta_star = 0;
    std::vector<double> refine_times;
    double speed_bound = 0;
    std::size_t runs = 0;                      // evolutions actually started
};

// Owns the frozen resolution schedule and the probe cache. Probes at the same
// (alpha, beta) resume a stored solver instead of restarting from t0.
class ShootProblem {
public:
    explicit ShootProblem(const ShootConfig& cfg);
    ~ShootProblem();

    const ShootConfig& config() const { return cfg_; }
    double s0() const { return -std::log(cfg_.epsilon); }
    double checkpoint(int n) const { return s0() + n * cfg_.checkpoint_spacing; }
    double t0() const { return -cfg_.epsilon; }

    // Base run to s_end at (alpha, beta) fixing refinement times and the CFL speed
    // for every later probe. Called lazily with the last checkpoint otherwise.
    void freeze_schedule(double alpha, double beta, double s_end);
    const std::vector<double>& schedule() const { return ecfg_.refine_times; }
    double speed_bound() const { return ecfg_.speed_bound; }

    ResidualValue evaluate(double alpha, double beta, double s_target, bool with_jacobian);
    Mat2 finite_difference(double alpha, double beta, double s_target);
    std::size_t runs() const { return runs_; }
    Field datum(double alpha, double beta) const;

    // Trust radii for the step taken towards checkpoint n+1.
    std::pair<double, double> trust_radii(int n) const;

private:
    struct Entry;
    ResidualValue advance(Entry& e, double s_target);
    std::unique_ptr<Entry> start(double alpha, double beta, bool tangents);
    void ensure_schedule(double s_target, double alpha, double beta);
    static constexpr std::size_t kCacheSize = 4;

    ShootConfig cfg_;
    EvolveConfig ecfg_;
    Grid1D grid_;
    bool frozen_ = false;
    double frozen_end_ = 0;
    std::pair<double, double> base_{0.0, 0.0};
    std::size_t clock_ = 0;
    std::mutex mu_;
    std::vector<std::unique_ptr<Entry>> cache_;
    std::size_t runs_ = 0;
};

// Residual T(alpha, beta) = (d^2_X U(0, s_target), d^3_X U(0, s_target)).
std::pair<double, double> residual(ShootProblem& prob, double alpha, double beta, double s_target);
Mat2 jacobian(ShootProblem& prob, double alpha, double beta, double s_target, JacobianMode mode,
              double* disagreement = nullptr);
NewtonResult newton_solve(ShootProblem& prob, double alpha0, double beta0, double s_target, int checkpoint_index);
// Called once per accepted checkpoint, in order (n = 0 first).
using CheckpointObserver = std::function<void(const ShootCheckpoint&)>;
ShootTrace shoot_sequence(const ShootConfig& cfg, const CheckpointObserver& on_checkpoint = {});
ShootTrace shoot_sequence(ShootProblem& prob, const CheckpointObserver& on_checkpoint = {});

double det2(const Mat2& m);

// Variational jet derivative at one node: physical jet d of u and tangent jet e
// at xi (d^n u, d^n v), n = 0..5. Returns (dJ2, dJ3, ds).
std::array<double, 3> jet_sensitivity(const PointJet& u_jet, const PointJet& v_jet, const FrameScaling& sc);

}  // namespace bhlab
