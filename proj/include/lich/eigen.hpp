#pragma once

#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "lich/minimize.hpp"
#include "lich/problem.hpp"

namespace lich {

struct EigenResult {
    double lambda = 0.0;  // may be +infinity when the admissible set is empty
    std::optional<ScalarField> argmin;
    double constraint_residual = 0.0;
    bool converged = false;
};

/// First eigenvalue of the p-Laplacian over nonnegative fields vanishing on
/// {f < 0}: minimizes int|grad u|^p / int|u|^p by normalized projected
/// descent restricted to the unmasked nodes. Returns +infinity when the mask
/// covers every node, and 0 with a constant argmin when the mask is empty.
EigenResult lambda_f(const ProblemData& prob, const SolverConfig& cfg);

/// Constrained Rayleigh quotient: minimize over ||u||_q = 1 with
/// int|f^-||u|^q {= or <=} eta int|f^-|, by an augmented Lagrangian with a
/// clipped multiplier in the inequality mode; best of several seeded starts.
EigenResult lambda_f_eta_q(const ProblemData& prob, const SubcriticalParams& sub,
                           double eta, bool inequality, const SolverConfig& cfg);

struct EtaScanResult {
    std::vector<std::pair<double, double>> samples;  // (eta, lambda)
    double lambda_f_value = 0.0;
    std::optional<double> selected_eta;  // largest eta with lambda >= lambda_f - delta
};

/// Warm-started scan over ascending eta values.
EtaScanResult eta_scan(const ProblemData& prob, const SubcriticalParams& sub,
                       std::span<const double> etas, double delta, const SolverConfig& cfg);

}  // namespace lich
