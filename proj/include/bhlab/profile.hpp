#pragma once

#include <string>
#include <vector>

namespace bhlab {

inline constexpr int kMaxFamilyIndex = 4;

// U_i(X) and its derivatives. U_i is the odd decreasing root of X = -U - U^(2i+1).
struct ProfilePoint {
    double X = 0;
    double u = 0;
    std::vector<double> derivatives;  // orders 1..n
    int family_index = 2;
};

double ui_eval(double X, int i);
// Orders 1..max_order (max_order <= 9), exact up to rounding.
std::vector<double> ui_derivatives(double X, int i, int max_order);
ProfilePoint ui_point(double X, int i, int max_order = 9);

// Rescaled profile (nu/120)^(-1/4) U_2((nu/120)^(1/4) X); its fifth derivative at 0 is nu.
double u2_nu_eval(double X, double nu);
std::vector<double> u2_nu_derivatives(double X, double nu, int max_order);

// Two-term expansion -sgn(X)|X|^(1/5) + sgn(X)/5 |X|^(-3/5), valid for |X| >= 10.
double u2_asymptotic(double X);

struct BoundCheck {
    std::string name;
    std::size_t evaluated = 0;
    std::size_t failures = 0;
    double worst_margin = 0;  // min over samples of (rhs - lhs); negative means violated
    bool passed() const { return failures == 0; }
};

struct BoundReport {
    std::vector<BoundCheck> checks;  // amplitude, slope, away_from_origin, far_slope
    bool all_passed() const;
};

// Evaluates |U2| <= (1+X^4)^(1/20), |U2'| <= (1+X^4)^(-1/5), the away-from-origin
// slope bracket (for |X| >= l) and the |X| >= 100 slope bracket.
BoundReport u2_bound_certificates(const std::vector<double>& X_samples, double l = 0.1);

// Residual of the family ODE -U/(2i) + ((2i+1)/(2i) X + U) U' = 0.
double ui_ode_residual(double X, int i);

}  // namespace bhlab
