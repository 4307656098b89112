#pragma once

#include "lich/problem.hpp"

namespace lich {

/// Regularized subcritical energy
///   (1/p) int |grad u|_reg^p + (h/p) int |u|^p
///   - (1/q) int f |u|^q + (1/q) int a (u^2 + eps)^(-q/2).
/// Returns +infinity (flagged overflow) when eps = 0 and the singular term
/// diverges at a node with a > 0.
double energy(const ScalarField& u, const ProblemData& prob, const SubcriticalParams& sub,
              double delta_reg);

/// Nodal representation G of the first variation: integrate(G * phi) equals
/// the derivative of energy at u in direction phi, for every discrete phi.
/// G = p_laplacian(u) + h|u|^(p-2)u - f|u|^(q-2)u - a u (u^2+eps)^(-q/2-1).
ScalarField first_variation(const ScalarField& u, const ProblemData& prob,
                            const SubcriticalParams& sub, double delta_reg);

/// Coercive part (1/p) int |grad u|^p + (h/p) int |u|^p + (1/q) int |f^-||u|^q.
/// energy = g_q - (1/q) int f^+ |u|^q + (1/q) int a (u^2+eps)^(-q/2).
double g_q(const ScalarField& u, const ProblemData& prob, const SubcriticalParams& sub,
           double delta_reg);

/// Energy at the critical exponent: q = p_star, eps = 0.
double critical_energy(const ScalarField& u, const ProblemData& prob, double delta_reg);

}  // namespace lich
