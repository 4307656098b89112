#pragma once

#include "lich/grid.hpp"

namespace lich {

/// Exponents and coefficients of the equation
///   -div(|grad u|^(p-2) grad u) + h u^(p-1) = f u^(p*-1) + a u^(-p*-1)
/// on the unit torus, with h a negative constant, a >= 0 pointwise.
struct ProblemData {
    int n;           // spatial dimension
    double p;        // 1 < p < n
    double h;        // negative constant coefficient
    ScalarField f;
    ScalarField a;
    double p_star;   // np / (n - p)
    double p_flat;   // (p + p_star) / 2

    static ProblemData make(const TorusGrid& grid, double p, double h,
                            ScalarField f, ScalarField a);
};

/// Subcritical stage (q, eps). The solver pipelines keep q inside
/// (p_flat, p_star] with q = p_star only at eps = 0; the energy evaluators
/// themselves accept any q > p (useful for derivative checks).
struct SubcriticalParams {
    double q;
    double eps;      // >= 0

    static SubcriticalParams make(double q, double eps);
};

/// True when (q, eps) lies in the window the existence analysis assumes.
bool in_subcritical_window(const ProblemData& prob, const SubcriticalParams& sub);

/// Discrete sup, inf, and the split integrals of f used by the thresholds.
struct CoefficientStats {
    double sup_f;
    double inf_f;
    double int_f;
    double int_f_plus;
    double int_f_minus_abs;  // integral of |f^-|
    double int_a;
};
CoefficientStats coefficient_stats(const ProblemData& prob);

}  // namespace lich
