#include "lich/problem.hpp"

#include <stdexcept>

#include "lich/operators.hpp"

namespace lich {

ProblemData ProblemData::make(const TorusGrid& grid, double p, double h, ScalarField f,
                              ScalarField a) {
    int n = grid.dim();
    if (!(p > 1.0 && p < n))
        throw std::invalid_argument("ProblemData: requires 1 < p < n");
    if (!(h < 0.0)) throw std::invalid_argument("ProblemData: h must be negative");
    if (!(f.grid() == grid) || !(a.grid() == grid))
        throw std::invalid_argument("ProblemData: coefficient grid mismatch");
    for (std::int64_t i = 0; i < a.size(); ++i)
        if (a[i] < 0.0) throw std::invalid_argument("ProblemData: a must be nonnegative");
    double p_star = n * p / (n - p);
    return ProblemData{n, p, h, std::move(f), std::move(a), p_star, 0.5 * (p + p_star)};
}

SubcriticalParams SubcriticalParams::make(double q, double eps) {
    if (!(q > 1.0)) throw std::invalid_argument("SubcriticalParams: q must exceed 1");
    if (eps < 0.0) throw std::invalid_argument("SubcriticalParams: eps must be >= 0");
    return SubcriticalParams{q, eps};
}

bool in_subcritical_window(const ProblemData& prob, const SubcriticalParams& sub) {
    if (sub.q > prob.p_flat && sub.q < prob.p_star) return true;
    return sub.q == prob.p_star && sub.eps == 0.0;
}

CoefficientStats coefficient_stats(const ProblemData& prob) {
    CoefficientStats s{};
    const ScalarField& f = prob.f;
    ScalarField fp(f.grid()), fm(f.grid());
    for (std::int64_t i = 0; i < f.size(); ++i) {
        fp[i] = f[i] > 0.0 ? f[i] : 0.0;
        fm[i] = f[i] < 0.0 ? -f[i] : 0.0;
    }
    s.sup_f = f.max_value();
    s.inf_f = f.min_value();
    s.int_f = integrate(f);
    s.int_f_plus = integrate(fp);
    s.int_f_minus_abs = integrate(fm);
    s.int_a = integrate(prob.a);
    return s;
}

}  // namespace lich
