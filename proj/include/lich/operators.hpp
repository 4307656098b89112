#pragma once

#include "lich/grid.hpp"

namespace lich {

/// Discrete integral over the torus: cell_weight * sum of nodal values.
double integrate(const ScalarField& f);

/// L^r norm, r >= 1, with respect to the unit-volume quadrature.
double lp_norm(const ScalarField& f, double r);

/// Forward differences per axis with periodic wrap, divided by spacing.
VectorField grad(const ScalarField& u);

/// Backward-difference divergence; the negative adjoint of grad, so
/// integrate(divergence(w) * v) == -integrate(<w, grad v>) holds to rounding.
ScalarField divergence(const VectorField& w);

/// Regularized gradient magnitude sqrt(|g|^2 + delta_reg^2) at one node.
double grad_norm_reg(const VectorField& g, std::int64_t node, double delta_reg);

/// Default gradient regularization: 1e-10 below p = 2 (singular case), else 0.
double default_delta_reg(double p);

/// -div(|grad u|^(p-2) grad u) with the same staggering as grad, so the weak
/// and strong forms agree identically (discrete summation by parts).
ScalarField p_laplacian(const ScalarField& u, double p, double delta_reg);

/// integrate(|grad u|^(p-2) <grad u, grad v>); equals
/// integrate(p_laplacian(u) * v) exactly up to rounding.
double weak_pairing(const ScalarField& u, const ScalarField& v, double p, double delta_reg);

/// Weighted L2 inner product of nodal fields.
double inner(const ScalarField& a, const ScalarField& b);

/// integrate(|grad u|_reg^p).
double grad_energy(const ScalarField& u, double p, double delta_reg);

}  // namespace lich
