#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "lich/energy.hpp"
#include "lich/problem.hpp"

namespace lich {

struct SolverConfig {
    double tol_grad = 1e-8;     // L2 norm of the projected gradient
    double tol_energy = 1e-12;  // relative energy decrease at convergence
    int max_iters = 20000;
    std::uint64_t seed = 0;
    double delta_reg = -1.0;    // negative means default_delta_reg(p)

    /// When an initial field is supplied, also try the default candidate
    /// starts and keep the best local value found.
    bool explore = false;

    /// Sobolev-norm cap; iterates are pulled back below it, so a run in a
    /// region without critical points ends flagged non-convergent.
    double norm_cap = 0.0;      // <= 0 disables

    // mountain pass
    int path_nodes = 17;
    int path_max_outer = 4000;

    double tol_residual = 1e-6;
    double distinct_tol = 1e-3;

    double resolved_delta_reg(double p) const;
};

struct ConstraintSpec {
    enum class Mode { sphere, band };
    Mode mode = Mode::sphere;
    double k_lo = 0.0;
    double k_hi = 0.0;  // k_lo == k_hi for sphere

    static ConstraintSpec sphere(double k);
    static ConstraintSpec band(double k_lo, double k_hi);
};

struct MinimizeResult {
    ScalarField minimizer;
    double mu = 0.0;           // attained energy value
    double multiplier = 0.0;   // lambda with G ~ lambda * q |u|^(q-2) u
    double k_attained = 0.0;
    int iterations = 0;
    double grad_norm = 0.0;    // projected gradient norm at exit
    bool converged = false;
};

struct LandscapeSample {
    double k;
    double mu;
    bool converged;
};

struct LandscapeCurve {
    double q = 0.0;
    double eps = 0.0;
    std::vector<LandscapeSample> samples;
};

/// Projected-gradient descent on the hypersurface ||u||_q^q = k: step along
/// the negative first variation, take absolute values, rescale back to the
/// sphere (exact for the homogeneous constraint). Armijo backtracking with a
/// Barzilai-Borwein trial step; nonnegative minimizer.
MinimizeResult minimize_on_sphere(const ProblemData& prob, const SubcriticalParams& sub,
                                  double k, const std::optional<ScalarField>& init,
                                  const SolverConfig& cfg);

/// Same descent, but the constraint projection rescales only when ||u||_q^q
/// leaves [k_lo, k_hi]; returns the interior or boundary minimizer.
MinimizeResult minimize_on_band(const ProblemData& prob, const SubcriticalParams& sub,
                                double k_lo, double k_hi,
                                const std::optional<ScalarField>& init,
                                const SolverConfig& cfg);

/// Sphere minimization at each k of the ascending grid, warm-starting from
/// the previous minimizer; deterministic given cfg.seed.
LandscapeCurve landscape(const ProblemData& prob, const SubcriticalParams& sub,
                         std::span<const double> k_grid, const SolverConfig& cfg);

/// max |mu_{k(1 +/- rel_step)} - mu_k| with shared warm starts.
double continuity_probe(const ProblemData& prob, const SubcriticalParams& sub, double k,
                        double rel_step, const SolverConfig& cfg);

}  // namespace lich
