#pragma once

#include <functional>
#include <memory>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "bhlab/grid.hpp"
#include "bhlab/hilbert.hpp"
#include "bhlab/selfsim.hpp"

namespace bhlab {

// BurgersHilbert: u_t + u u_x = H[u]. LinearAdvection replaces u u_x by c u_x
// (a test surrogate with an exact translation solution).
enum class EquationModel { BurgersHilbert, LinearAdvection };

struct EvolveConfig {
    double cfl = 0.4;
    bool dealias = true;
    double stop_slope = 500.0;  // stop once ||u_x||_inf exceeds this
    double t_max = 1.0;
    int output_every = 2;       // steps between frame extractions
    HilbertMethod hilbert;
    bool hilbert_enabled = true;
    EquationModel model = EquationModel::BurgersHilbert;
    double advection_speed = 1.0;

    // Resolution schedule: the uniform grid is doubled (exact Fourier zero-padding)
    // whenever spacing exceeds theta^b / points_per_scale, up to max_points. A
    // non-empty refine_times replays a frozen schedule instead.
    std::size_t max_points = std::size_t{1} << 19;
    double points_per_scale = 24.0;
    std::vector<double> refine_times;
    double speed_bound = 0.0;   // CFL speed; 0 picks 1.25 max(1, ||u0||_inf)

    double s_max = std::numeric_limits<double>::infinity();
    int family = 2;             // which self-similar frame to extract
    bool extract = true;
    double xi_window = 0.2;

    // Self-similar frames sampled on [-frame_half_width, frame_half_width) every frame_ds in s.
    double frame_ds = 0.05;
    double frame_half_width = 8.0;
    std::size_t frame_points = 256;
    // Physical snapshots every snapshot_ds in s (0 disables); the final field is always kept.
    double snapshot_ds = 0.5;
};

struct TangentPair {
    Field u;
    Field v_alpha;
    Field v_beta;
};

// Field-level single operations.
Field rhs_physical(const Field& u, const EvolveConfig& cfg);
Field step(const Field& u, double dt, const EvolveConfig& cfg);
TangentPair step_tangent(const TangentPair& pair, double dt, const EvolveConfig& cfg);

// Pseudo-spectral RK4 integrator holding the state in (dealiased) Fourier space.
// Tangent fields are co-evolved through the same stages, which makes them the
// exact derivative of the discrete map.
class Solver {
public:
    Solver(const Field& u0, double t0, const EvolveConfig& cfg, const std::vector<Field>& tangents = {});

    void step();    // one RK4 step; replays frozen refinements that fall due first
    void refine();  // double the resolution by zero-padding (state and tangents)
    // one RK4 step of an arbitrary dt; CflViolation if dt max(1,|u|) > cfl dx
    void advance(double dt);
    // right-hand side of the current state, in physical space
    Field evaluate_rhs();

    double time() const { return t_; }
    double dt() const { return dt_; }
    std::size_t step_count() const { return steps_; }
    const Grid1D& grid() const { return grid_; }
    const ComplexVec& coeffs() const { return u_; }
    const ComplexVec& tangent_coeffs(std::size_t i) const { return v_[i]; }
    std::size_t n_tangents() const { return v_.size(); }
    double speed_bound() const { return speed_; }
    const std::vector<double>& refinement_times() const { return refined_at_; }
    const EvolveConfig& config() const { return cfg_; }

    Field field() const;
    Field tangent(std::size_t i) const;
    double l2_norm() const;
    double max_abs_u() const { return last_max_u_; }
    // sqrt of the energy fraction in the top quarter of the kept band
    double spectral_tail() const;
    // ||u_x||_inf with sub-grid refinement of the extremum
    double max_slope() const;

private:
    void rhs(const ComplexVec& y, ComplexVec& out, bool keep_u);
    void tangent_rhs(const ComplexVec& y, ComplexVec& out);
    void resize_buffers();
    void apply_mask(ComplexVec& c) const;
    void hilbert_add(const ComplexVec& y, const RealVec* phys, ComplexVec& out);

    EvolveConfig cfg_;
    Grid1D grid_;
    double t_ = 0, dt_ = 0, speed_ = 1;
    std::size_t steps_ = 0;
    std::size_t next_refine_ = 0;
    std::vector<double> refined_at_;
    double last_max_u_ = 0;

    ComplexVec u_;
    std::vector<ComplexVec> v_;
    std::shared_ptr<const FftPlan> plan_;
    // scratch
    ComplexVec cy_, ck_, cacc_, cwork_;
    std::vector<ComplexVec> vy_, vk_, vacc_;
    RealVec ustage_, rwork_, vphys_;
};

struct TrajectoryRecord {
    std::size_t step = 0;
    double t = 0;
    std::size_t n_points = 0;
    double dt = 0;
    ModulationState mod;       // rates filled from the modulation system (U_2 frame)
    double s = 0;
    Jet jet{};                 // d^n_X U(0, s)
    Jet hilbert{};             // H-values at the origin, Extraction convention
    double l2 = 0;
    double max_slope = 0;
    double max_abs = 0;
    double spectral_tail = 0;
};

enum class StopReason { StopSlope, TMax, SMax, Callback };
std::string to_string(StopReason r);

struct Trajectory {
    double t0 = 0;
    std::vector<TrajectoryRecord> records;
    std::vector<SelfSimilarFrame> frames;
    std::vector<Field> snapshots;
    std::vector<std::size_t> snapshot_records;  // record index of each snapshot
    Field final_field;
    StopReason stop = StopReason::TMax;
    std::vector<double> refine_times;
    double speed_bound = 0;
    double l2_initial = 0;
};

using RunObserver = std::function<bool(const Solver&, const TrajectoryRecord&)>;

// Integrates until stop_slope, t_max or s_max; extracts the modulated frame every
// output_every steps and keeps s strictly increasing.
Trajectory run(const Field& u0, double t0, const EvolveConfig& cfg, const RunObserver& observer = {});

// Record for the solver's current state (one extraction).
TrajectoryRecord make_record(const Solver& solver, std::optional<double> xi_hint, Extraction* out = nullptr);

}  // namespace bhlab
