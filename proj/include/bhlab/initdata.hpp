#pragma once

#include <string>
#include <vector>

#include "bhlab/grid.hpp"

namespace bhlab {

enum class UhatFamily { Zero, SmallBump };
// Exponential: 1 - sigma(|X|-1) with the e^{-1/t} smooth step spanning all of [1,2];
// its spectrum decays fastest of the three, so it is the default.
enum class ChiTransition { QuinticSmoothstep, MollifiedLinear, Exponential };

UhatFamily parse_uhat_family(const std::string& name);  // zero | bump
ChiTransition parse_chi_transition(const std::string& name);  // exponential | smoothstep | mollified
std::string to_string(UhatFamily f);
std::string to_string(ChiTransition c);

struct InitConfig {
    double epsilon = 0.1;
    double alpha = 0.0;
    double beta = 0.0;
    double kappa0 = 0.0;
    UhatFamily uhat = UhatFamily::Zero;
    double uhat_amplitude = 0.0;  // SmallBump only, |A| <= epsilon
    ChiTransition chi = ChiTransition::Exponential;
    int family = 2;               // profile U_i seeded into the datum
    double c_alpha = 1.0;         // parameter box |alpha| <= c_alpha eps
    double c_beta = 1.0;          // parameter box |beta| <= c_beta eps

    // self-similar exponents: u = eps^a U(x / eps^b)
    double amp_exponent() const { return 1.0 / (2.0 * family); }
    double len_exponent() const { return 1.0 + 1.0 / (2.0 * family); }
};

// Even cutoff: 1 on [-1,1], 0 for |X| >= 2, monotone in between.
double chi_eval(double X, ChiTransition kind);
// Derivative of order 1 or 2 (0 returns chi itself).
double chi_derivative(double X, ChiTransition kind, int order);

// The free part of the datum and its derivatives at the origin.
double uhat_eval(double X, const InitConfig& cfg);
double uhat_d2_origin(const InitConfig& cfg);
double uhat_d3_origin(const InitConfig& cfg);

// Self-similar datum U(X, -log eps) on an X grid spanning at least [-eps^-b, eps^-b].
Field build_initial_selfsim(const InitConfig& cfg, const Grid1D& X_grid);
// Physical datum u0 on a grid spanning at least [-2, 2].
Field build_initial_physical(const InitConfig& cfg, const Grid1D& grid);
// Parameter derivatives of u0: d/dalpha and d/dbeta (independent of alpha, beta).
Field initial_tangent_alpha(const InitConfig& cfg, const Grid1D& grid);
Field initial_tangent_beta(const InitConfig& cfg, const Grid1D& grid);

struct InitCheck {
    std::string name;
    double value = 0;
    double bound = 0;
    bool passed = false;
    double margin() const { return bound - value; }
};

struct InitReport {
    std::vector<InitCheck> checks;
    double grad_l2 = 0;        // ||d_X U(., -log eps)||_L2
    double support_radius = 0;
    bool all_passed() const;
    const InitCheck* find(const std::string& name) const;
};

InitReport validate_initial(const InitConfig& cfg, const Field& u0);

}  // namespace bhlab
