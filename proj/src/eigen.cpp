#include "lich/eigen.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "lich/operators.hpp"
#include "lich/rng.hpp"

namespace lich {

namespace {

const double kInf = std::numeric_limits<double>::infinity();

std::vector<bool> negative_mask(const ScalarField& f) {
    std::vector<bool> mask(static_cast<std::size_t>(f.size()));
    for (std::int64_t i = 0; i < f.size(); ++i) mask[static_cast<std::size_t>(i)] = f[i] < 0.0;
    return mask;
}

double pow_mass(const ScalarField& u, double r) {
    std::vector<double> w(static_cast<std::size_t>(u.size()));
    for (std::int64_t i = 0; i < u.size(); ++i)
        w[static_cast<std::size_t>(i)] = std::pow(std::abs(u[i]), r);
    return u.grid().cell_weight() * pairwise_sum(w);
}

/// Rayleigh quotient and its nodal L2 gradient.
struct Quotient {
    double value;
    ScalarField grad;
};

Quotient rayleigh(const ScalarField& u, double p, double dreg) {
    double W = grad_energy(u, p, dreg);
    double D = pow_mass(u, p);
    Quotient out{W / D, p_laplacian(u, p, dreg)};
    double R = out.value;
    for (std::int64_t i = 0; i < u.size(); ++i) {
        double ui = u[i];
        double dpow = ui == 0.0 ? 0.0 : std::copysign(std::pow(std::abs(ui), p - 1.0), ui);
        out.grad[i] = (p / D) * (out.grad[i] - R * dpow);
    }
    return out;
}

void apply_mask(ScalarField& u, const std::vector<bool>& mask) {
    for (std::int64_t i = 0; i < u.size(); ++i)
        if (mask[static_cast<std::size_t>(i)]) u[i] = 0.0;
}

/// Projected BB descent of the masked Rayleigh quotient from one start.
std::pair<double, ScalarField> masked_quotient_descent(const ProblemData& prob,
                                                       const std::vector<bool>& mask,
                                                       ScalarField u,
                                                       const SolverConfig& cfg) {
    const double p = prob.p;
    const double dreg = cfg.resolved_delta_reg(p);

    apply_mask(u, mask);
    for (std::int64_t i = 0; i < u.size(); ++i) u[i] = std::abs(u[i]);
    double m = pow_mass(u, p);
    if (m == 0.0) throw std::invalid_argument("lambda_f: start vanishes off the mask");
    for (std::int64_t i = 0; i < u.size(); ++i) u[i] /= std::pow(m, 1.0 / p);

    Quotient qt = rayleigh(u, p, dreg);
    apply_mask(qt.grad, mask);
    ScalarField prev_u = u, prev_g = qt.grad;
    bool have_prev = false;
    double t = 0.0;

    int max_iters = std::max(cfg.max_iters, 2000);
    for (int iter = 0; iter < max_iters; ++iter) {
        double gn = std::sqrt(inner(qt.grad, qt.grad));
        if (gn <= cfg.tol_grad * (1.0 + qt.value)) break;

        if (have_prev) {
            ScalarField s(u.grid()), y(u.grid());
            for (std::int64_t i = 0; i < u.size(); ++i) {
                s[i] = u[i] - prev_u[i];
                y[i] = qt.grad[i] - prev_g[i];
            }
            double sy = inner(s, y);
            t = sy > 0.0 ? inner(s, s) / sy : t * 4.0;
        } else {
            t = 0.1 / (gn + 1e-30);
        }
        t = std::clamp(t, 1e-16, 1e12);

        prev_u = u;
        prev_g = qt.grad;
        have_prev = true;

        bool accepted = false;
        for (int bt = 0; bt < 60; ++bt) {
            ScalarField v = u;
            for (std::int64_t i = 0; i < v.size(); ++i) v[i] -= t * qt.grad[i];
            for (std::int64_t i = 0; i < v.size(); ++i) v[i] = std::abs(v[i]);
            apply_mask(v, mask);
            double vm = pow_mass(v, p);
            if (vm > 0.0) {
                for (std::int64_t i = 0; i < v.size(); ++i) v[i] /= std::pow(vm, 1.0 / p);
                Quotient qv = rayleigh(v, p, dreg);
                apply_mask(qv.grad, mask);
                if (qv.value <= qt.value - 1e-6 * t * gn * gn) {
                    u = v;
                    qt = qv;
                    accepted = true;
                    break;
                }
            }
            t *= 0.5;
        }
        if (!accepted) break;
    }
    return {qt.value, u};
}

}  // namespace

EigenResult lambda_f(const ProblemData& prob, const SolverConfig& cfg) {
    std::vector<bool> mask = negative_mask(prob.f);
    std::int64_t free_count = 0;
    for (bool b : mask)
        if (!b) ++free_count;

    if (free_count == 0) return {kInf, std::nullopt, 0.0, true};
    if (free_count == prob.f.size()) {
        // Constants are admissible and already optimal.
        EigenResult r{0.0, ScalarField(prob.f.grid(), 1.0), 0.0, true};
        return r;
    }

    const int seeds = 5;
    EigenResult best;
    best.lambda = kInf;
    for (int s = 0; s < seeds; ++s) {
        ScalarField u0 = random_smooth_field(prob.f.grid(), cfg.seed * 977 + s);
        for (std::int64_t i = 0; i < u0.size(); ++i) u0[i] = 1.0 + 0.5 * u0[i];
        auto [val, u] = masked_quotient_descent(prob, mask, u0, cfg);
        if (val < best.lambda) {
            best.lambda = val;
            best.argmin = u;
            best.converged = true;
        }
    }

    // Residual of the vanishing constraint on supp f^-: exact zero by masking.
    double resid = 0.0;
    const ScalarField& u = *best.argmin;
    for (std::int64_t i = 0; i < u.size(); ++i)
        if (mask[static_cast<std::size_t>(i)]) resid = std::max(resid, std::abs(u[i]));
    best.constraint_residual = resid;
    return best;
}

namespace {

struct ALObjective {
    const ProblemData& prob;
    const SubcriticalParams& sub;
    const ScalarField& fminus;
    double target;   // eta * int|f^-|
    double scale;    // normalization for c(u)
    bool inequality;
    double nu;
    double rho;
    double dreg;

    double constraint_raw(const ScalarField& u) const {
        std::vector<double> w(static_cast<std::size_t>(u.size()));
        for (std::int64_t i = 0; i < u.size(); ++i)
            w[static_cast<std::size_t>(i)] = fminus[i] * std::pow(std::abs(u[i]), sub.q);
        return u.grid().cell_weight() * pairwise_sum(w);
    }
    double c_of(const ScalarField& u) const { return (constraint_raw(u) - target) / scale; }

    double value(const ScalarField& u, double* c_out) const {
        double W = grad_energy(u, prob.p, dreg);
        double D = pow_mass(u, prob.p);
        double c = c_of(u);
        if (c_out) *c_out = c;
        double ch = inequality ? std::max(c, -nu / rho) : c;
        return W / D + nu * ch + 0.5 * rho * ch * ch;
    }

    /// L2 gradient, before tangent projection.
    ScalarField gradient(const ScalarField& u) const {
        Quotient qt = rayleigh(u, prob.p, dreg);
        double c = c_of(u);
        double mult = inequality ? std::max(0.0, nu + rho * c) : nu + rho * c;
        ScalarField g = qt.grad;
        for (std::int64_t i = 0; i < u.size(); ++i) {
            double ui = u[i];
            double dq = ui == 0.0 ? 0.0 : sub.q * std::copysign(std::pow(std::abs(ui), sub.q - 1.0), ui);
            g[i] += mult * fminus[i] * dq / scale;
        }
        return g;
    }
};

void normalize_q(ScalarField& u, double q) {
    double m = pow_mass(u, q);
    if (m <= 0.0) throw std::invalid_argument("eigen: zero field in normalization");
    for (std::int64_t i = 0; i < u.size(); ++i) u[i] = std::abs(u[i]) / std::pow(m, 1.0 / q);
}

/// Inner solve: projected BB descent of the AL objective over ||u||_q = 1.
void al_inner(ALObjective& obj, ScalarField& u, double tol, int max_iters) {
    const double q = obj.sub.q;
    normalize_q(u, q);
    double c = 0.0;
    double E = obj.value(u, &c);

    ScalarField prev_u = u, prev_g = u;
    bool have_prev = false;
    double t = 0.0;

    for (int iter = 0; iter < max_iters; ++iter) {
        ScalarField g = obj.gradient(u);
        ScalarField normal(u.grid());
        for (std::int64_t i = 0; i < u.size(); ++i) {
            double ui = u[i];
            normal[i] = ui == 0.0 ? 0.0 : q * std::copysign(std::pow(std::abs(ui), q - 1.0), ui);
        }
        double nn = inner(normal, normal);
        double lam = nn > 0.0 ? inner(g, normal) / nn : 0.0;
        for (std::int64_t i = 0; i < u.size(); ++i) g[i] -= lam * normal[i];
        double gn = std::sqrt(inner(g, g));
        if (gn <= tol) break;

        if (have_prev) {
            ScalarField s(u.grid()), y(u.grid());
            for (std::int64_t i = 0; i < u.size(); ++i) {
                s[i] = u[i] - prev_u[i];
                y[i] = g[i] - prev_g[i];
            }
            double sy = inner(s, y);
            t = sy > 0.0 ? inner(s, s) / sy : t * 4.0;
        } else {
            t = 0.1 / (gn + 1e-30);
        }
        t = std::clamp(t, 1e-16, 1e10);

        prev_u = u;
        prev_g = g;
        have_prev = true;

        bool accepted = false;
        for (int bt = 0; bt < 60; ++bt) {
            ScalarField v = u;
            for (std::int64_t i = 0; i < v.size(); ++i) v[i] -= t * g[i];
            normalize_q(v, q);
            double cv = 0.0;
            double Ev = obj.value(v, &cv);
            if (Ev <= E - 1e-6 * t * gn * gn) {
                u = v;
                E = Ev;
                accepted = true;
                break;
            }
            t *= 0.5;
        }
        if (!accepted) break;
    }
}

}  // namespace

EigenResult lambda_f_eta_q(const ProblemData& prob, const SubcriticalParams& sub,
                           double eta, bool inequality, const SolverConfig& cfg) {
    if (!(eta > 0.0)) throw std::invalid_argument("lambda_f_eta_q: eta must be positive");
    ScalarField fminus(prob.f.grid());
    for (std::int64_t i = 0; i < fminus.size(); ++i)
        fminus[i] = prob.f[i] < 0.0 ? -prob.f[i] : 0.0;
    double F = integrate(fminus);
    if (F <= 0.0) {
        // No negative part: the constraint is vacuous and constants win.
        return {0.0, ScalarField(prob.f.grid(), 1.0), 0.0, true};
    }
    double target = eta * F;

    // Feasibility floor on a grid: mass fully concentrated at the node where
    // |f^-| is smallest still pays min|f^-|.
    double fmin = fminus[0];
    for (std::int64_t i = 0; i < fminus.size(); ++i) fmin = std::min(fmin, fminus[i]);
    if (!inequality && target < fmin * (1.0 - 1e-12))
        throw std::invalid_argument(
            "lambda_f_eta_q: infeasible constraint, eta below the grid resolution floor");

    const int seeds = 5;
    const double dreg = cfg.resolved_delta_reg(prob.p);
    EigenResult best;
    best.lambda = kInf;

    for (int s = 0; s < seeds; ++s) {
        ScalarField u = random_smooth_field(prob.f.grid(), cfg.seed * 1303 + 7 * s + 1);
        for (std::int64_t i = 0; i < u.size(); ++i) u[i] = 1.0 + 0.45 * u[i];
        normalize_q(u, sub.q);

        ALObjective obj{prob, sub, fminus, target, std::max(target, 1e-30),
                        inequality, 0.0, 10.0, dreg};
        double prev_c = kInf;
        bool feasible = false;
        for (int outer = 0; outer < 40; ++outer) {
            double tol = std::max(cfg.tol_grad, 1e-3 * std::pow(0.5, outer));
            al_inner(obj, u, tol, std::max(cfg.max_iters / 10, 500));
            double c = obj.c_of(u);
            double viol = inequality ? std::max(c, 0.0) : std::abs(c);
            if (viol <= 1e-9 && tol <= cfg.tol_grad * 4.0) {
                feasible = true;
                break;
            }
            obj.nu = inequality ? std::max(0.0, obj.nu + obj.rho * c) : obj.nu + obj.rho * c;
            if (viol > 0.25 * std::abs(prev_c)) obj.rho = std::min(obj.rho * 4.0, 1e10);
            prev_c = viol;
        }

        double W = grad_energy(u, prob.p, dreg);
        double D = pow_mass(u, prob.p);
        double lam = W / D;
        double resid = inequality ? std::max(obj.constraint_raw(u) - target, 0.0)
                                  : std::abs(obj.constraint_raw(u) - target);
        if (lam < best.lambda) {
            best.lambda = lam;
            best.argmin = u;
            best.constraint_residual = resid / std::max(target, 1e-30);
            best.converged = feasible;
        }
    }
    return best;
}

EtaScanResult eta_scan(const ProblemData& prob, const SubcriticalParams& sub,
                       std::span<const double> etas, double delta, const SolverConfig& cfg) {
    for (std::size_t i = 0; i < etas.size(); ++i) {
        if (!(etas[i] > 0.0)) throw std::invalid_argument("eta_scan: etas must be positive");
        if (i > 0 && !(etas[i] > etas[i - 1]))
            throw std::invalid_argument("eta_scan: etas must be ascending");
    }
    EtaScanResult out;
    out.lambda_f_value = lambda_f(prob, cfg).lambda;
    for (double eta : etas) {
        EigenResult r = lambda_f_eta_q(prob, sub, eta, false, cfg);
        out.samples.emplace_back(eta, r.lambda);
        if (r.lambda >= out.lambda_f_value - delta) {
            if (!out.selected_eta || eta > *out.selected_eta) out.selected_eta = eta;
        }
    }
    return out;
}

}  // namespace lich
