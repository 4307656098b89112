#pragma once

#include <optional>
#include <string>
#include <vector>

#include "lich/eigen.hpp"
#include "lich/minimize.hpp"
#include "lich/thresholds.hpp"

namespace lich {

/// Stage list of the subcritical continuation: eps decreasing to 0, q
/// increasing to p*, followed by one extrapolation solve at (0, p*).
struct ContinuationSchedule {
    std::vector<std::pair<double, double>> stages;  // (eps_j, q_j)

    /// eps_j = eps0 2^-j, q_j = p* - (p* - q_start) 2^-j, j = 0..n_stages-1.
    static ContinuationSchedule geometric(const ProblemData& prob, double eps0 = 0.1,
                                          int n_stages = 8, double q_start = 0.0);
};

struct SolveReport {
    enum class Branch { negative_energy, mountain_pass, single };
    Branch branch = Branch::single;
    ScalarField u;
    std::vector<double> energy_at_stage;
    double critical_energy = 0.0;  // q = p*, eps = 0 evaluation
    double k_attained = 0.0;
    double weak_residual_value = 0.0;
    double min_u = 0.0;
    double lemma22_bound = 0.0;    // 0 when inapplicable (inf f >= 0)
    double distinctness = 0.0;     // L^q distance to the sibling branch
    double multiplier = 0.0;
    bool converged = false;

    SolveReport() : u(TorusGrid(2, 4)) {}
    explicit SolveReport(const TorusGrid& g) : u(g) {}
};

/// Discretized path for the mountain-pass search; endpoints stay fixed.
struct PathState {
    std::vector<ScalarField> nodes;
    int max_index = 0;
    double max_energy = 0.0;
};

struct RescaleResult {
    ProblemData scaled;
    double c;                 // transform scale actually applied
    double c_other_reading;   // value under the self-referential reading
};

/// Variable change u = c * u~ with c^(p*-p) = p* |h| / (eta0 int|f^-|):
/// f~ = c^(p*-p) f, a~ = a / c^(p*+p). The scaled problem satisfies
/// |h| = (eta0/p*) int |f~^-| with equality, and sup f~ / int|f~^-| is
/// unchanged. c_other_reading reports the alternative constant obtained by
/// reading the scaled coefficient inside its own definition.
RescaleResult rescale_problem(const ProblemData& prob, double eta0);

/// L2 norm of the first variation over (1 + ||u||^(p-1)) with the Sobolev
/// norm; the canonical convergence metric.
double weak_residual(const ScalarField& u, const ProblemData& prob,
                     const SubcriticalParams& sub, double delta_reg);

struct IdentityCheck {
    double lhs;  // int h u^(p-1)
    double rhs;  // int f u^(p*-1) + int a u^(-p*-1)
    double gap;               // relative
    bool contradiction_flag;  // f >= 0 and a >= 0 with h < 0 force lhs < 0 <= rhs
};

IdentityCheck integral_identity_check(const ScalarField& u, const ProblemData& prob);

struct PipelineSetup {
    GateInputs gate;
    ContinuationSchedule schedule;
    double k_star = 0.0;       // lower band edge; 0 = auto (k0/16 at first stage)
    double band_hi = 0.0;      // upper band edge for the single pipeline; 0 = auto
    double anchor_k_cap = 0.0; // cap for the upper-anchor expansion; 0 = auto
};

struct PipelineResult {
    ThresholdReport gate_report;
    bool gate_passed = false;
    SolveReport branch1;
    SolveReport branch2;       // mountain-pass branch (two-solution pipeline only)
    std::vector<std::string> stage_log;
};

/// Theorem-1 pipeline: per stage, band minimization on [k_*, k_{1,q}] for the
/// negative-energy branch and a mountain pass between the two zero-energy
/// anchor minimizers for the second branch; then one eps = 0 extrapolation
/// solve at q = p*.
PipelineResult two_solution_pipeline(const ProblemData& prob, const PipelineSetup& setup,
                                     const SolverConfig& cfg);

/// Theorem-2 pipeline: band minimization on [k_*, k_**] per stage.
PipelineResult single_solution_pipeline(const ProblemData& prob, const PipelineSetup& setup,
                                        TheoremCase which, const SolverConfig& cfg);

/// Numerical mountain pass between two low-energy anchors: flow the
/// maximal-energy node of a discretized path orthogonally to the path, then
/// refine the located transition state by constrained sphere solves with a
/// sign bisection on the constraint multiplier.
SolveReport mountain_pass(const ProblemData& prob, const SubcriticalParams& sub,
                          const ScalarField& u_A, const ScalarField& u_B,
                          const SolverConfig& cfg);

}  // namespace lich
