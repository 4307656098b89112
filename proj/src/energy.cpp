#include "lich/energy.hpp"

#include <cmath>
#include <limits>
#include <vector>

#include "lich/operators.hpp"

namespace lich {

namespace {

inline double signed_pow(double u, double e) {
    if (u == 0.0) return 0.0;
    return std::copysign(std::pow(std::abs(u), e), u);
}

}  // namespace

double energy(const ScalarField& u, const ProblemData& prob, const SubcriticalParams& sub,
              double delta_reg) {
    const TorusGrid& g = u.grid();
    const double p = prob.p, q = sub.q, eps = sub.eps;

    double kinetic = grad_energy(u, p, delta_reg) / p;

    std::vector<double> mass(static_cast<std::size_t>(g.size()));
    std::vector<double> fterm(static_cast<std::size_t>(g.size()));
    std::vector<double> aterm(static_cast<std::size_t>(g.size()));
    for (std::int64_t i = 0; i < g.size(); ++i) {
        double au = std::abs(u[i]);
        double uq = std::pow(au, q);
        mass[static_cast<std::size_t>(i)] = std::pow(au, p);
        fterm[static_cast<std::size_t>(i)] = prob.f[i] * uq;
        double den = u[i] * u[i] + eps;
        double s;
        if (den == 0.0) {
            if (prob.a[i] == 0.0) {
                s = 0.0;
            } else {
                return std::numeric_limits<double>::infinity();
            }
        } else {
            s = prob.a[i] * std::pow(den, -0.5 * q);
        }
        aterm[static_cast<std::size_t>(i)] = s;
    }
    const double w = g.cell_weight();
    double value = kinetic + (prob.h / p) * w * pairwise_sum(mass) -
                   (1.0 / q) * w * pairwise_sum(fterm) + (1.0 / q) * w * pairwise_sum(aterm);
    return value;
}

ScalarField first_variation(const ScalarField& u, const ProblemData& prob,
                            const SubcriticalParams& sub, double delta_reg) {
    const double p = prob.p, q = sub.q, eps = sub.eps;
    ScalarField out = p_laplacian(u, p, delta_reg);
    for (std::int64_t i = 0; i < u.size(); ++i) {
        double ui = u[i];
        double den = ui * ui + eps;
        double sing;
        if (den == 0.0) {
            sing = prob.a[i] == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
        } else {
            sing = prob.a[i] * ui * std::pow(den, -0.5 * q - 1.0);
        }
        out[i] += prob.h * signed_pow(ui, p - 1.0) - prob.f[i] * signed_pow(ui, q - 1.0) - sing;
    }
    return out;
}

double g_q(const ScalarField& u, const ProblemData& prob, const SubcriticalParams& sub,
           double delta_reg) {
    const TorusGrid& g = u.grid();
    const double p = prob.p, q = sub.q;
    double kinetic = grad_energy(u, p, delta_reg) / p;
    std::vector<double> mass(static_cast<std::size_t>(g.size()));
    std::vector<double> fminus(static_cast<std::size_t>(g.size()));
    for (std::int64_t i = 0; i < g.size(); ++i) {
        double au = std::abs(u[i]);
        mass[static_cast<std::size_t>(i)] = std::pow(au, p);
        double fm = prob.f[i] < 0.0 ? -prob.f[i] : 0.0;
        fminus[static_cast<std::size_t>(i)] = fm * std::pow(au, q);
    }
    const double w = g.cell_weight();
    return kinetic + (prob.h / p) * w * pairwise_sum(mass) +
           (1.0 / q) * w * pairwise_sum(fminus);
}

double critical_energy(const ScalarField& u, const ProblemData& prob, double delta_reg) {
    return energy(u, prob, SubcriticalParams{prob.p_star, 0.0}, delta_reg);
}

}  // namespace lich
