#include "bhlab/initdata.hpp"

#include <cmath>
#include <limits>

#include "bhlab/error.hpp"
#include "bhlab/hilbert.hpp"
#include "bhlab/numerics.hpp"
#include "bhlab/profile.hpp"

namespace bhlab {

UhatFamily parse_uhat_family(const std::string& name) {
    if (name == "zero") return UhatFamily::Zero;
    if (name == "bump") return UhatFamily::SmallBump;
    fail(ErrorCode::ConfigError, "unknown uhat family '" + name + "' (zero|bump)");
}

ChiTransition parse_chi_transition(const std::string& name) {
    if (name == "smoothstep") return ChiTransition::QuinticSmoothstep;
    if (name == "mollified") return ChiTransition::MollifiedLinear;
    if (name == "exponential") return ChiTransition::Exponential;
    fail(ErrorCode::ConfigError, "unknown chi transition '" + name + "' (exponential|smoothstep|mollified)");
}

std::string to_string(UhatFamily f) { return f == UhatFamily::Zero ? "zero" : "bump"; }
std::string to_string(ChiTransition c) {
    switch (c) {
        case ChiTransition::QuinticSmoothstep: return "smoothstep";
        case ChiTransition::MollifiedLinear: return "mollified";
        case ChiTransition::Exponential: return "exponential";
    }
    return "?";
}

namespace {

// Mollified-linear transition: chi' = -psi on [1,2] with psi a flat-topped
// C-infinity plateau of height h = 1/(1-w), ramps of width w at both ends.
constexpr double kRamp = 0.25;
constexpr double kPlateau = 1.0 / (1.0 - kRamp);

double sigma(double y) { return smooth_step(y); }

double sigma_prime(double y) {
    if (y <= 0.0 || y >= 1.0) return 0.0;
    const double a = std::exp(-1.0 / y), b = std::exp(-1.0 / (1.0 - y));
    const double s = a + b;
    return a * b * (1.0 / (y * y) + 1.0 / ((1.0 - y) * (1.0 - y))) / (s * s);
}

// S(z) = int_0^z sigma, S(1) = 1/2
double sigma_integral(double z) {
    if (z <= 0.0) return 0.0;
    if (z >= 1.0) return 0.5;
    return integrate_gl(sigma, 0.0, z, 6, 16);
}

double psi(double t) {
    if (t <= 0.0 || t >= 1.0) return 0.0;
    return kPlateau * sigma(t / kRamp) * sigma((1.0 - t) / kRamp);
}

double psi_prime(double t) {
    if (t <= 0.0 || t >= 1.0) return 0.0;
    return kPlateau / kRamp *
           (sigma_prime(t / kRamp) * sigma((1.0 - t) / kRamp) - sigma(t / kRamp) * sigma_prime((1.0 - t) / kRamp));
}

double sigma_second(double y) {
    if (y <= 2e-3 || y >= 1.0 - 2e-3) return 0.0;  // below e^-500
    // sigma = 1/(1+r), r = exp(1/y - 1/(1-y))
    const double r = std::exp(1.0 / y - 1.0 / (1.0 - y));
    const double q = -1.0 / (y * y) - 1.0 / ((1.0 - y) * (1.0 - y));
    const double qp = 2.0 / (y * y * y) - 2.0 / ((1.0 - y) * (1.0 - y) * (1.0 - y));
    if (!std::isfinite(r)) return 0.0;
    const double p = 1.0 + r;
    return -r * ((q * q + qp) * p - 2.0 * r * q * q) / (p * p * p);
}

// int_0^t psi
double psi_integral(double t) {
    if (t <= 0.0) return 0.0;
    if (t >= 1.0) return 1.0;
    if (t <= kRamp) return kPlateau * kRamp * sigma_integral(t / kRamp);
    if (t <= 1.0 - kRamp) return kPlateau * (0.5 * kRamp + t - kRamp);
    return 1.0 - kPlateau * kRamp * sigma_integral((1.0 - t) / kRamp);
}

// C^4 polynomial step on [0,1]: P' = 630 t^4 (1-t)^4
double poly_step(double t, int order) {
    if (t <= 0.0 || t >= 1.0) return (order == 0 && t >= 1.0) ? 1.0 : 0.0;
    const double s = 1.0 - t;
    switch (order) {
        case 0: return t * t * t * t * t * (126.0 + t * (-420.0 + t * (540.0 + t * (-315.0 + t * 70.0))));
        case 1: return 630.0 * t * t * t * t * s * s * s * s;
        default: return 2520.0 * t * t * t * s * s * s * (1.0 - 2.0 * t);
    }
}

constexpr double kBumpWidth = 2.0;

}  // namespace

double chi_derivative(double X, ChiTransition kind, int order) {
    if (order < 0 || order > 2) fail(ErrorCode::OrderOutOfRange, "chi derivatives limited to order 2");
    const double ax = std::abs(X);
    const double t = ax - 1.0;
    const double sg = (X < 0) ? -1.0 : 1.0;
    if (t <= 0.0) return order == 0 ? 1.0 : 0.0;
    if (t >= 1.0) return 0.0;
    if (kind == ChiTransition::Exponential) {
        switch (order) {
            case 0: return 1.0 - sigma(t);
            case 1: return -sg * sigma_prime(t);
            default: return -sigma_second(t);
        }
    }
    if (kind == ChiTransition::QuinticSmoothstep) {
        switch (order) {
            case 0: return 1.0 - poly_step(t, 0);
            case 1: return -sg * poly_step(t, 1);
            default: return -poly_step(t, 2);
        }
    }
    switch (order) {
        case 0: return 1.0 - psi_integral(t);
        case 1: return -sg * psi(t);
        default: return -psi_prime(t);
    }
}

double chi_eval(double X, ChiTransition kind) { return chi_derivative(X, kind, 0); }

double uhat_eval(double X, const InitConfig& cfg) {
    double v = 0.0;
    if (cfg.uhat == UhatFamily::SmallBump) {
        const double y = X / kBumpWidth;
        v += cfg.uhat_amplitude * (0.5 * X * X + X * X * X / 6.0) * std::exp(-y * y * y * y);
    }
    if (cfg.kappa0 != 0.0) {
        // tail that cancels kappa0 outside the core, blended by chi(2 eps^b X)
        const double eb = std::pow(cfg.epsilon, cfg.len_exponent());
        v -= std::pow(cfg.epsilon, -cfg.amp_exponent()) * cfg.kappa0 * (1.0 - chi_eval(2.0 * eb * X, cfg.chi));
    }
    return v;
}

double uhat_d2_origin(const InitConfig& cfg) { return cfg.uhat == UhatFamily::SmallBump ? cfg.uhat_amplitude : 0.0; }
double uhat_d3_origin(const InitConfig& cfg) { return cfg.uhat == UhatFamily::SmallBump ? cfg.uhat_amplitude : 0.0; }

namespace {

void check_epsilon(const InitConfig& cfg) {
    if (!(cfg.epsilon > 0.0 && cfg.epsilon <= 0.5)) fail(ErrorCode::InvalidArgument, "epsilon must lie in (0, 0.5]");
    if (cfg.family < 1 || cfg.family > kMaxFamilyIndex) fail(ErrorCode::InvalidArgument, "family index out of range");
}

}  // namespace

Field build_initial_selfsim(const InitConfig& cfg, const Grid1D& X_grid) {
    check_epsilon(cfg);
    const double eb = std::pow(cfg.epsilon, cfg.len_exponent());
    const double half = 1.0 / eb;
    if (X_grid.x_min > -half || X_grid.x_max < half)
        fail(ErrorCode::GridTooSmall, "X grid must span [-eps^-b, eps^-b]");
    return Field::sample(
        X_grid,
        [&](double X) {
            return ui_eval(X, cfg.family) * chi_eval(2.0 * eb * X, cfg.chi) + uhat_eval(X, cfg) +
                   chi_eval(X, cfg.chi) * (cfg.alpha * X * X + cfg.beta * X * X * X);
        },
        {"U0", -std::log(cfg.epsilon)});
}

Field build_initial_physical(const InitConfig& cfg, const Grid1D& grid) {
    check_epsilon(cfg);
    if (grid.x_min > -2.0 || grid.x_max < 2.0) fail(ErrorCode::GridTooSmall, "physical grid must span [-2, 2]");
    const double ea = std::pow(cfg.epsilon, cfg.amp_exponent());
    const double eb = std::pow(cfg.epsilon, cfg.len_exponent());
    InitConfig bump_only = cfg;
    bump_only.kappa0 = 0.0;
    return Field::sample(
        grid,
        [&](double x) {
            const double X = x / eb;
            const double c2 = chi_eval(2.0 * x, cfg.chi);
            double v = 0.0;
            if (c2 != 0.0) v += ea * ui_eval(X, cfg.family) * c2 + cfg.kappa0 * c2;
            const double c1 = chi_eval(X, cfg.chi);
            if (c1 != 0.0) v += ea * c1 * (cfg.alpha * X * X + cfg.beta * X * X * X);
            if (cfg.uhat == UhatFamily::SmallBump) v += ea * uhat_eval(X, bump_only);
            return v;
        },
        {"u0", -cfg.epsilon});
}

namespace {

Field tangent(const InitConfig& cfg, const Grid1D& grid, int power, const char* label) {
    check_epsilon(cfg);
    const double ea = std::pow(cfg.epsilon, cfg.amp_exponent());
    const double eb = std::pow(cfg.epsilon, cfg.len_exponent());
    return Field::sample(
        grid,
        [&](double x) {
            const double X = x / eb;
            return ea * chi_eval(X, cfg.chi) * std::pow(X, power);
        },
        {label, -cfg.epsilon});
}

}  // namespace

Field initial_tangent_alpha(const InitConfig& cfg, const Grid1D& grid) { return tangent(cfg, grid, 2, "v_alpha"); }
Field initial_tangent_beta(const InitConfig& cfg, const Grid1D& grid) { return tangent(cfg, grid, 3, "v_beta"); }

bool InitReport::all_passed() const {
    for (const auto& c : checks)
        if (!c.passed) return false;
    return true;
}

const InitCheck* InitReport::find(const std::string& name) const {
    for (const auto& c : checks)
        if (c.name == name) return &c;
    return nullptr;
}

InitReport validate_initial(const InitConfig& cfg, const Field& u0) {
    check_epsilon(cfg);
    InitReport rep;
    const double eps = cfg.epsilon;
    const double a = cfg.amp_exponent(), b = cfg.len_exponent();
    auto add = [&](const std::string& name, double value, double bound) {
        rep.checks.push_back({name, value, bound, value <= bound});
    };

    // Derivatives of the bump part of U-hat on a dedicated grid (the kappa0 tail
    // is identically zero on the middle field and handled analytically below).
    InitConfig bump_only = cfg;
    bump_only.kappa0 = 0.0;
    Grid1D bg = Grid1D::make(-32.0, 32.0, 2048);
    Field bump = Field::sample(bg, [&](double X) { return uhat_eval(X, bump_only); });
    std::vector<Field> dbump;
    for (int n = 1; n <= 8; ++n) dbump.push_back(spectral_derivative(bump, n));
    ComplexVec bc = forward_normalized(bump.values().data(), bg.n_points);
    PointJet j0 = eval_point(bc, bg, 0.0, 5);

    add("uhat_origin_vanish", std::max({std::abs(j0.d[0]), std::abs(j0.d[1]), std::abs(j0.d[4]), std::abs(j0.d[5])}),
        1e-10);
    add("uhat_origin_d2_d3", std::max(std::abs(j0.d[2]), std::abs(j0.d[3])), eps);

    const double middle = 0.5 * std::pow(eps, -b);
    double amp_ratio = 0.0, deriv_ratio = 0.0;
    for (std::size_t k = 0; k < bg.n_points; ++k) {
        const double X = bg.x(k);
        if (std::abs(X) > middle) continue;
        const double w = 1.0 + X * X * X * X;
        amp_ratio = std::max(amp_ratio, std::abs(bump[k]) / (eps * std::pow(w, 0.05)));
        for (const auto& d : dbump) deriv_ratio = std::max(deriv_ratio, std::abs(d[k]) / (eps * std::pow(w, -0.2)));
    }
    // ratio <= 1 means the envelope holds
    add("uhat_middle_amplitude", amp_ratio, 1.0);
    add("uhat_middle_derivatives", deriv_ratio, 1.0);

    // far-field slope of the kappa0 tail: 2 kappa0 eps^(b-a) chi'
    double chi1 = 0.0;
    for (int k = 0; k <= 1000; ++k) chi1 = std::max(chi1, std::abs(chi_derivative(1.0 + k / 1000.0, cfg.chi, 1)));
    add("uhat_far_slope", 2.0 * std::abs(cfg.kappa0) * std::pow(eps, b - a) * chi1, 0.5 * eps);

    add("alpha_box", std::abs(cfg.alpha), cfg.c_alpha * eps);
    add("beta_box", std::abs(cfg.beta), cfg.c_beta * eps);

    // ||d_X U||_L2 = eps^((b - 2a)/2) ||u0'||_L2
    Field du = spectral_derivative(u0, 1);
    rep.grad_l2 = std::pow(eps, 0.5 * (b - 2.0 * a)) * l2_norm(du);
    add("grad_l2", rep.grad_l2, std::sqrt(6.0));

    std::size_t first = 0, last = 0;
    if (support_indices(u0, first, last))
        rep.support_radius = std::max(std::abs(u0.grid().x(first)), std::abs(u0.grid().x(last)));
    add("support_radius", rep.support_radius, 1.0);

    // steepest slope sits at the origin and equals -1/eps
    auto jet = local_jet(u0, 0.0, 1);
    add("origin_slope", std::abs(jet[1] * eps + 1.0), 1e-8);
    double min_slope = std::numeric_limits<double>::infinity();
    for (double v : du.values()) min_slope = std::min(min_slope, v);
    add("min_slope_at_origin", -min_slope * eps - 1.0, 1e-8);
    return rep;
}

}  // namespace bhlab
