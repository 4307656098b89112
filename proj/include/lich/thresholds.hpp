#pragma once

#include <string>
#include <utility>
#include <vector>

#include "lich/problem.hpp"

namespace lich {

/// Sharp constant of the Euclidean Sobolev embedding H^1_p -> L^{p*}
/// (Talenti's closed form), 1 < p < n.
double sobolev_K(int n, double p);

/// Empirical constant A for ||u||_{p*}^p <= (K^p + eps_sob)||grad u||_p^p + A||u||_p^p
/// on the given grid: max deficit over a probe family, clamped at 0, times 1.5.
double calibrate_A(const TorusGrid& grid, double p, double eps_sob, int probes);

/// k0 = ((p+q)/(2p) * |h| / int|f^-|)^(q/(q-p)); the scale where the
/// energy landscape first dips nonpositive.
double k0(double p, double q, double h, double F_minus);

/// Right-hand side of the integral bound on a: the q -> p* limit of phi_q.
double condition_1_3_rhs(int n, double p, double h, double F_minus);

/// phi(q) = ((p+q)/(2p) |h|/F)^((q+p)/(q-p)) * (|h|/(2p))(q-p).
double phi_q(double p, double q, double h, double F_minus);

/// k1 = (|h| q / (eta0 F))^(q/(q-p)), k2 = 2^(n/p) k1.
std::pair<double, double> k1q_k2q(int n, double p, double q, double h, double eta0,
                                  double F_minus);

/// m = min{ delta / (A + (K^p+1)(|h| + p delta)), (p-1)|h|/p }; Cq = eta0 m / (4|h|).
std::pair<double, double> m_and_Cq(double p, double h, double delta, double K, double A,
                                   double eta0);

/// C1 = (eta0/(4|h|)) min{ (lambda_f + h) / (2p [A + (K^p+1) lambda_f]), (p-1)|h|/p }.
/// Requires lambda_f + h > 0.
double C1(double p, double h, double lambda_f, double K, double A, double eta0);

struct C2Result {
    double C2;
    double Lambda;
    double kappa;     // (K^p+1)(K^p+1+A)^((p*-p)/p) sup_f Lambda^(p*-p)
    bool kappa_ok;    // kappa < 1/2
};

/// Lambda = [p mu_hat + sup_f k_** + (1+|h|) k_**^(p/p_flat)]^(1/p) and the
/// companion constant C2 bounding sup f for the two-solution comparison.
C2Result C2_and_Lambda(int n, double p, double h, double K, double A, double mu_hat,
                       double k_starstar, double sup_f);

struct NonexistenceVerdict {
    double lhs;   // int a^(np/(2np+n-p))
    double rhs;
    bool nonexistence_below_Lambda;  // lhs > rhs
};

/// No positive solution with Sobolev norm <= Lambda exists when lhs > rhs.
NonexistenceVerdict nonexistence_check(int n, double p, double K, double A, double Lambda,
                                       const ScalarField& a, const ScalarField& f);

/// min{ (h / inf_f)^(1/(p_flat - p)), 1 }; requires inf_f < 0.
double lemma22_lower_bound(double p, double p_flat, double h, double inf_f);

/// -(1/p*) min{ (|h|/F)^((2n-p)/p), 1 } * int f^+; an upper bound for the
/// landscape value at k0, strictly negative whenever sup f > 0.
double mu_k0_upper_bound(int n, double p, double h, double F_minus, double F_plus);

/// k0 variant when int f < 0 with sup f <= 0: ((q/p) h / int_f)^(q/(q-p)).
double k0_theorem2(double p, double q, double h, double int_f);

enum class TheoremCase { thm1, thm2_case1, thm2_case2 };

struct GateInputs {
    double lambda_f;    // may be +infinity
    double eta0;
    double K;
    double A;
    double mu_hat;      // landscape-roof estimate (scan-window based)
    double k_starstar;  // upper concentration scale estimate (scan-window based)
};

struct GateClause {
    std::string name;
    bool pass;
    double lhs;
    double rhs;
};

struct ThresholdReport {
    std::vector<std::pair<std::string, double>> constants;
    std::vector<GateClause> clauses;
    bool overall = false;

    std::string to_text() const;
    std::string to_csv() const;
};

/// Evaluates the hypothesis clauses of the requested theorem in order and
/// reports pass/fail per clause plus the overall verdict.
ThresholdReport theorem_gate(const ProblemData& prob, TheoremCase which,
                             const GateInputs& in);

}  // namespace lich
