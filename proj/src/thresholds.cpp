#include "lich/thresholds.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>

#include "lich/operators.hpp"
#include "lich/rng.hpp"

namespace lich {

namespace {

const double kInf = std::numeric_limits<double>::infinity();

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace

double sobolev_K(int n, double p) {
    if (!(p > 1.0 && p < n)) throw std::domain_error("sobolev_K: requires 1 < p < n");
    double nn = n;
    double lg = std::lgamma(1.0 + 0.5 * nn) + std::lgamma(nn) - std::lgamma(nn / p) -
                std::lgamma(1.0 + nn - nn / p);
    double gamma_factor = std::exp(lg / nn);
    return std::pow(M_PI, -0.5) * std::pow(nn, -1.0 / p) *
           std::pow((p - 1.0) / (nn - p), 1.0 - 1.0 / p) * gamma_factor;
}

double calibrate_A(const TorusGrid& grid, double p, double eps_sob, int probes) {
    if (!(eps_sob > 0.0)) throw std::domain_error("calibrate_A: eps_sob must be positive");
    int n = grid.dim();
    double K = sobolev_K(n, p);
    double p_star = n * p / (n - p);
    double Kp = std::pow(K, p);

    std::vector<ScalarField> family;
    family.emplace_back(grid, 1.0);
    for (int d = 0; d < n; ++d) {
        ScalarField c(grid), s(grid);
        for (std::int64_t i = 0; i < grid.size(); ++i) {
            double x = grid.coord(grid.coords(i)[d]);
            c[i] = std::cos(2.0 * M_PI * x);
            s[i] = 1.0 + 0.5 * std::sin(2.0 * M_PI * x);
        }
        family.push_back(c);
        family.push_back(s);
    }
    for (int m = 0; m < probes; ++m) {
        ScalarField r = random_smooth_field(grid, 1000 + m);
        for (std::int64_t i = 0; i < grid.size(); ++i) r[i] += 0.5;
        family.push_back(r);
    }

    double worst = 0.0;
    for (const ScalarField& u : family) {
        double up = lp_norm(u, p);
        if (up == 0.0) continue;
        double lhs = std::pow(lp_norm(u, p_star), p);
        double gn = grad_energy(u, p, 0.0);
        double deficit = (lhs - (Kp + eps_sob) * gn) / std::pow(up, p);
        worst = std::max(worst, deficit);
    }
    return 1.5 * worst;
}

double k0(double p, double q, double h, double F_minus) {
    if (!(q > p)) throw std::domain_error("k0: requires q > p");
    if (F_minus == 0.0) throw std::domain_error("k0: division by zero, int |f^-| vanishes");
    double base = (p + q) / (2.0 * p) * std::abs(h) / F_minus;
    return std::pow(base, q / (q - p));
}

double condition_1_3_rhs(int n, double p, double h, double F_minus) {
    if (!(p > 1.0 && p < n)) throw std::domain_error("condition_1_3_rhs: requires 1 < p < n");
    if (F_minus <= 0.0)
        throw std::domain_error("condition_1_3_rhs: int |f^-| must be positive");
    double np = n - p;
    return p / (2.0 * np) * std::pow((2.0 * n - p) / (2.0 * np), 2.0 * n / p - 1.0) *
           std::pow(std::abs(h) / F_minus, 2.0 * n / p) * F_minus;
}

double phi_q(double p, double q, double h, double F_minus) {
    if (!(q > p)) throw std::domain_error("phi_q: requires q > p");
    if (F_minus <= 0.0) throw std::domain_error("phi_q: int |f^-| must be positive");
    double base = (p + q) / (2.0 * p) * std::abs(h) / F_minus;
    return std::pow(base, (q + p) / (q - p)) * std::abs(h) / (2.0 * p) * (q - p);
}

std::pair<double, double> k1q_k2q(int n, double p, double q, double h, double eta0,
                                  double F_minus) {
    if (!(q > p)) throw std::domain_error("k1q_k2q: requires q > p");
    if (!(eta0 > 0.0)) throw std::domain_error("k1q_k2q: eta0 must be positive");
    if (F_minus <= 0.0) throw std::domain_error("k1q_k2q: int |f^-| must be positive");
    double k1 = std::pow(std::abs(h) * q / (eta0 * F_minus), q / (q - p));
    return {k1, std::pow(2.0, static_cast<double>(n) / p) * k1};
}

std::pair<double, double> m_and_Cq(double p, double h, double delta, double K, double A,
                                   double eta0) {
    double Kp = std::pow(K, p);
    double m = std::min(delta / (A + (Kp + 1.0) * (std::abs(h) + p * delta)),
                        (p - 1.0) * std::abs(h) / p);
    return {m, eta0 * m / (4.0 * std::abs(h))};
}

double C1(double p, double h, double lambda_f, double K, double A, double eta0) {
    if (!(lambda_f + h > 0.0))
        throw std::domain_error("C1: hypothesis violated, requires |h| < lambda_f");
    double Kp = std::pow(K, p);
    double first = (lambda_f + h) / (2.0 * p * (A + (Kp + 1.0) * lambda_f));
    double second = (p - 1.0) * std::abs(h) / p;
    return eta0 / (4.0 * std::abs(h)) * std::min(first, second);
}

C2Result C2_and_Lambda(int n, double p, double h, double K, double A, double mu_hat,
                       double k_starstar, double sup_f) {
    double p_star = n * p / (n - p);
    double p_flat = 0.5 * (p + p_star);
    double Kp = std::pow(K, p);
    double e = (p_star - p) / p;
    double roof = mu_hat * p + k_starstar + (1.0 + std::abs(h)) * std::pow(k_starstar, p / p_flat);
    C2Result r{};
    r.C2 = std::min(1.0 / (2.0 * (Kp + 1.0)) * std::pow(Kp + 1.0 + A, -e) * std::pow(roof, -e),
                    1.0);
    double Lambda_roof =
        p * mu_hat + sup_f * k_starstar + (1.0 + std::abs(h)) * std::pow(k_starstar, p / p_flat);
    r.Lambda = std::pow(Lambda_roof, 1.0 / p);
    r.kappa = (Kp + 1.0) * std::pow(Kp + 1.0 + A, e) * sup_f * std::pow(r.Lambda, p_star - p);
    r.kappa_ok = r.kappa < 0.5;
    return r;
}

NonexistenceVerdict nonexistence_check(int n, double p, double K, double A, double Lambda,
                                       const ScalarField& a, const ScalarField& f) {
    if (!(p > 1.0 && p < n))
        throw std::domain_error("nonexistence_check: requires 1 < p < n");
    double p_star = n * p / (n - p);
    double denom = 2.0 * n * p + n - p;
    double beta = n * p / denom;

    ScalarField apow(a.grid()), fpow(f.grid());
    for (std::int64_t i = 0; i < a.size(); ++i) apow[i] = std::pow(a[i], beta);
    for (std::int64_t i = 0; i < f.size(); ++i) {
        double fm = f[i] < 0.0 ? -f[i] : 0.0;
        fpow[i] = std::pow(fm, p_star);
    }
    double lhs = integrate(apow);
    double Kp1A = std::pow(K, p) + 1.0 + A;
    double rhs = std::pow(Kp1A, 2.0 * p * n * n / (denom * (n - p))) *
                 std::pow(Lambda, 2.0 * p * p * n * n / (denom * (n - p))) *
                 std::pow(integrate(fpow), (n - p) / denom);
    return {lhs, rhs, lhs > rhs};
}

double lemma22_lower_bound(double p, double p_flat, double h, double inf_f) {
    if (!(inf_f < 0.0))
        throw std::domain_error("lemma22_lower_bound: inapplicable, requires inf f < 0");
    return std::min(std::pow(h / inf_f, 1.0 / (p_flat - p)), 1.0);
}

double mu_k0_upper_bound(int n, double p, double h, double F_minus, double F_plus) {
    if (F_plus < 0.0) throw std::domain_error("mu_k0_upper_bound: int f^+ must be >= 0");
    double p_star = n * p / (n - p);
    double factor = std::min(std::pow(std::abs(h) / F_minus, (2.0 * n - p) / p), 1.0);
    return -factor * F_plus / p_star;
}

double k0_theorem2(double p, double q, double h, double int_f) {
    if (!(q > p)) throw std::domain_error("k0_theorem2: requires q > p");
    if (!(int_f < 0.0)) throw std::domain_error("k0_theorem2: requires int f < 0");
    return std::pow(q / p * h / int_f, q / (q - p));
}

std::string ThresholdReport::to_text() const {
    std::string out;
    out += "constants:\n";
    for (const auto& [name, value] : constants)
        out += "  " + name + " = " + fmt17(value) + "\n";
    out += "clauses:\n";
    for (const GateClause& c : clauses)
        out += std::string("  [") + (c.pass ? "pass" : "FAIL") + "] " + c.name +
               "  (lhs=" + fmt17(c.lhs) + ", rhs=" + fmt17(c.rhs) + ")\n";
    out += std::string("verdict: ") + (overall ? "pass" : "fail") + "\n";
    return out;
}

std::string ThresholdReport::to_csv() const {
    std::string out = "name,value,verdict\n";
    for (const auto& [name, value] : constants) out += name + "," + fmt17(value) + ",\n";
    for (const GateClause& c : clauses)
        out += c.name + "," + fmt17(c.lhs) + "," + (c.pass ? "pass" : "fail") + "\n";
    out += std::string("overall,,") + (overall ? "pass" : "fail") + "\n";
    return out;
}

ThresholdReport theorem_gate(const ProblemData& prob, TheoremCase which,
                             const GateInputs& in) {
    ThresholdReport rep;
    CoefficientStats st = coefficient_stats(prob);
    const double habs = std::abs(prob.h);

    rep.constants = {
        {"n", static_cast<double>(prob.n)},
        {"p", prob.p},
        {"h", prob.h},
        {"int_f_minus", st.int_f_minus_abs},
        {"int_f_plus", st.int_f_plus},
        {"sup_f", st.sup_f},
        {"int_a", st.int_a},
        {"eta0", in.eta0},
        {"lambda_f", in.lambda_f},
        {"K", in.K},
        {"A", in.A},
        {"mu_hat", in.mu_hat},
        {"k_starstar", in.k_starstar},
    };

    auto clause = [&rep](const std::string& name, bool pass, double lhs, double rhs) {
        rep.clauses.push_back({name, pass, lhs, rhs});
    };

    if (which == TheoremCase::thm1) {
        clause("int_a_positive", st.int_a > 0.0, st.int_a, 0.0);
        clause("int_f_negative", st.int_f < 0.0, st.int_f, 0.0);
        clause("sup_f_positive", st.sup_f > 0.0, st.sup_f, 0.0);
    } else if (which == TheoremCase::thm2_case1) {
        clause("f_nonpositive", st.sup_f <= 0.0, st.sup_f, 0.0);
        clause("f_vanishes_somewhere", st.sup_f == 0.0, st.sup_f, 0.0);
    } else {
        clause("sup_f_negative", st.sup_f < 0.0, st.sup_f, 0.0);
    }
    clause("h_below_lambda_f", habs < in.lambda_f, habs, in.lambda_f);

    if (which == TheoremCase::thm1) {
        double c13 = st.int_f_minus_abs > 0.0
                         ? condition_1_3_rhs(prob.n, prob.p, prob.h, st.int_f_minus_abs)
                         : 0.0;
        rep.constants.emplace_back("condition_1_3_rhs", c13);
        clause("condition_1_3", st.int_f_minus_abs > 0.0 && st.int_a < c13, st.int_a, c13);

        double e41_rhs = in.eta0 / prob.p_star * st.int_f_minus_abs;
        clause("condition_e4_1", habs <= e41_rhs, habs, e41_rhs);

        double ratio = st.int_f_minus_abs > 0.0 ? st.sup_f / st.int_f_minus_abs : kInf;
        double c1 = 0.0;
        bool c1_ok = in.lambda_f + prob.h > 0.0;
        if (c1_ok) c1 = C1(prob.p, prob.h, in.lambda_f, in.K, in.A, in.eta0);
        C2Result c2 = C2_and_Lambda(prob.n, prob.p, prob.h, in.K, in.A, in.mu_hat,
                                    in.k_starstar, st.sup_f);
        double C = std::min(c1, in.eta0 / (habs * prob.p_star) * c2.C2);
        rep.constants.emplace_back("C1", c1);
        rep.constants.emplace_back("C2", c2.C2);
        rep.constants.emplace_back("Lambda", c2.Lambda);
        rep.constants.emplace_back("kappa", c2.kappa);
        rep.constants.emplace_back("C", C);
        clause("ratio_below_C", c1_ok && ratio <= C, ratio, C);
    }

    rep.overall = true;
    for (const GateClause& c : rep.clauses) rep.overall = rep.overall && c.pass;
    return rep;
}

}  // namespace lich
