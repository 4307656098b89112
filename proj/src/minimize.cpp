#include "lich/minimize.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "lich/operators.hpp"
#include "lich/rng.hpp"

namespace lich {

double SolverConfig::resolved_delta_reg(double p) const {
    return delta_reg >= 0.0 ? delta_reg : default_delta_reg(p);
}

ConstraintSpec ConstraintSpec::sphere(double k) {
    if (!(k > 0.0)) throw std::invalid_argument("ConstraintSpec: k must be positive");
    return {Mode::sphere, k, k};
}

ConstraintSpec ConstraintSpec::band(double k_lo, double k_hi) {
    if (!(0.0 < k_lo && k_lo < k_hi))
        throw std::invalid_argument("ConstraintSpec: band requires 0 < k_lo < k_hi");
    return {Mode::band, k_lo, k_hi};
}

namespace {

double q_mass(const ScalarField& u, double q) {
    std::vector<double> w(static_cast<std::size_t>(u.size()));
    for (std::int64_t i = 0; i < u.size(); ++i)
        w[static_cast<std::size_t>(i)] = std::pow(std::abs(u[i]), q);
    return u.grid().cell_weight() * pairwise_sum(w);
}

void rescale_to_mass(ScalarField& u, double q, double target) {
    double m = q_mass(u, q);
    if (m <= 0.0) throw std::invalid_argument("minimize: cannot project the zero field");
    double s = std::pow(target / m, 1.0 / q);
    for (std::int64_t i = 0; i < u.size(); ++i) u[i] *= s;
}

/// Absolute value followed by projection into the constraint set.
void retract(ScalarField& u, const ConstraintSpec& c, double q) {
    for (std::int64_t i = 0; i < u.size(); ++i) u[i] = std::abs(u[i]);
    double m = q_mass(u, q);
    if (c.mode == ConstraintSpec::Mode::sphere) {
        rescale_to_mass(u, q, c.k_lo);
    } else {
        if (m > c.k_hi) rescale_to_mass(u, q, c.k_hi);
        else if (m < c.k_lo) rescale_to_mass(u, q, c.k_lo);
    }
}

double sobolev_norm(const ScalarField& u, double p, double delta_reg) {
    double gp = grad_energy(u, p, delta_reg);
    std::vector<double> w(static_cast<std::size_t>(u.size()));
    for (std::int64_t i = 0; i < u.size(); ++i)
        w[static_cast<std::size_t>(i)] = std::pow(std::abs(u[i]), p);
    double mp = u.grid().cell_weight() * pairwise_sum(w);
    return std::pow(gp + mp, 1.0 / p);
}

struct Projected {
    ScalarField direction;  // projected gradient
    double lambda;          // multiplier estimate
    double norm;            // weighted L2 norm of the projected gradient
    bool on_boundary;
};

Projected project_gradient(const ScalarField& u, const ScalarField& G,
                           const ConstraintSpec& c, double q) {
    Projected out{ScalarField(u.grid()), 0.0, 0.0, false};
    bool constrain = c.mode == ConstraintSpec::Mode::sphere;
    if (c.mode == ConstraintSpec::Mode::band) {
        double m = q_mass(u, q);
        double tol = 1e-12 * (1.0 + m);
        out.on_boundary = m >= c.k_hi - tol || m <= c.k_lo + tol;
        constrain = out.on_boundary;
    }
    if (!constrain) {
        out.direction = G;
        out.lambda = 0.0;
        out.norm = std::sqrt(inner(G, G));
        return out;
    }
    ScalarField normal(u.grid());
    for (std::int64_t i = 0; i < u.size(); ++i) {
        double ui = u[i];
        normal[i] = ui == 0.0 ? 0.0 : q * std::copysign(std::pow(std::abs(ui), q - 1.0), ui);
    }
    double nn = inner(normal, normal);
    double lam = nn > 0.0 ? inner(G, normal) / nn : 0.0;
    out.direction = G;
    for (std::int64_t i = 0; i < u.size(); ++i) out.direction[i] -= lam * normal[i];
    out.lambda = lam;
    out.norm = std::sqrt(inner(out.direction, out.direction));
    return out;
}

MinimizeResult descend(const ProblemData& prob, const SubcriticalParams& sub,
                       const ConstraintSpec& cons, ScalarField u, const SolverConfig& cfg) {
    const double q = sub.q;
    const double dreg = cfg.resolved_delta_reg(prob.p);

    retract(u, cons, q);
    double E = energy(u, prob, sub, dreg);
    if (!std::isfinite(E))
        throw std::invalid_argument(
            "minimize: initial point has infinite energy (eps = 0 with u vanishing on supp a)");

    MinimizeResult res{u, E, 0.0, q_mass(u, q), 0, 0.0, false};

    ScalarField prev_u = u, prev_P = u;
    bool have_prev = false;
    double t = 0.0;
    double last_decrease = std::abs(E);

    for (int iter = 0; iter < cfg.max_iters; ++iter) {
        ScalarField G = first_variation(u, prob, sub, dreg);
        Projected pr = project_gradient(u, G, cons, q);
        res.iterations = iter;
        res.grad_norm = pr.norm;
        res.multiplier = pr.lambda;

        if (pr.norm <= cfg.tol_grad && last_decrease <= cfg.tol_energy * (1.0 + std::abs(E))) {
            res.converged = true;
            break;
        }

        // Barzilai-Borwein trial step, clipped; gradient scaling on the first pass.
        if (have_prev) {
            double ss = 0.0, sy = 0.0;
            {
                ScalarField s(u.grid()), y(u.grid());
                for (std::int64_t i = 0; i < u.size(); ++i) {
                    s[i] = u[i] - prev_u[i];
                    y[i] = pr.direction[i] - prev_P[i];
                }
                ss = inner(s, s);
                sy = inner(s, y);
            }
            t = sy > 0.0 ? ss / sy : t * 4.0;
        } else {
            t = 0.01 * (1.0 + std::sqrt(inner(u, u))) / (pr.norm + 1e-30);
        }
        t = std::clamp(t, 1e-16, 1e12);

        prev_u = u;
        prev_P = pr.direction;
        have_prev = true;

        bool accepted = false;
        for (int bt = 0; bt < 60; ++bt) {
            ScalarField v = u;
            for (std::int64_t i = 0; i < v.size(); ++i) v[i] -= t * pr.direction[i];
            retract(v, cons, q);
            if (cfg.norm_cap > 0.0 && sobolev_norm(v, prob.p, dreg) > cfg.norm_cap) {
                double s = cfg.norm_cap / sobolev_norm(v, prob.p, dreg);
                for (std::int64_t i = 0; i < v.size(); ++i) v[i] *= 0.999 * s;
                retract(v, cons, q);
            }
            double Ev = energy(v, prob, sub, dreg);
            if (std::isfinite(Ev) && Ev <= E - 1e-4 * t * pr.norm * pr.norm) {
                last_decrease = E - Ev;
                u = v;
                E = Ev;
                accepted = true;
                break;
            }
            t *= 0.5;
        }
        if (!accepted) {
            res.converged = pr.norm <= cfg.tol_grad;
            break;
        }
    }

    res.minimizer = u;
    res.mu = E;
    res.k_attained = q_mass(u, q);
    {
        ScalarField G = first_variation(u, prob, sub, cfg.resolved_delta_reg(prob.p));
        Projected pr = project_gradient(u, G, cons, q);
        res.grad_norm = pr.norm;
        res.multiplier = pr.lambda;
        if (pr.norm <= cfg.tol_grad) res.converged = true;
    }
    return res;
}

ScalarField constant_candidate(const TorusGrid& g, double level) {
    return ScalarField(g, level);
}

ScalarField perturbed_candidate(const TorusGrid& g, double level, std::uint64_t seed) {
    ScalarField u = random_smooth_field(g, seed + 17);
    for (std::int64_t i = 0; i < u.size(); ++i) u[i] = level * (1.0 + 0.05 * u[i]);
    return u;
}

/// Concentrated start: a floor plus a bump at the node where f is largest.
/// Gives the descent a foothold in the concentration basin at large k.
ScalarField spike_candidate(const ProblemData& prob, const SubcriticalParams& sub, double k) {
    const TorusGrid& g = prob.f.grid();
    std::int64_t best = 0;
    for (std::int64_t i = 0; i < g.size(); ++i)
        if (prob.f[i] > prob.f[best]) best = i;

    double inf_f = prob.f.min_value();
    double floor;
    if (inf_f < 0.0)
        floor = 0.9 * std::min(std::pow(prob.h / inf_f, 1.0 / (sub.q - prob.p)), 1.0);
    else
        floor = 1e-3;

    ScalarField u(g, floor);
    double t0 = std::pow(k / g.cell_weight(), 1.0 / sub.q);
    u[best] += t0;
    for (int d = 0; d < g.dim(); ++d) {
        u[g.shift(best, d, +1)] += 0.25 * t0;
        u[g.shift(best, d, -1)] += 0.25 * t0;
    }
    return u;
}

MinimizeResult minimize_dispatch(const ProblemData& prob, const SubcriticalParams& sub,
                                 const ConstraintSpec& cons,
                                 const std::optional<ScalarField>& init,
                                 const SolverConfig& cfg) {
    double k_rep = cons.mode == ConstraintSpec::Mode::sphere
                       ? cons.k_lo
                       : std::sqrt(cons.k_lo * cons.k_hi);
    double level = std::pow(k_rep, 1.0 / sub.q);

    std::vector<ScalarField> starts;
    if (init) starts.push_back(*init);
    if (!init || cfg.explore) {
        starts.push_back(constant_candidate(prob.f.grid(), level));
        starts.push_back(perturbed_candidate(prob.f.grid(), level, cfg.seed));
        starts.push_back(spike_candidate(prob, sub, k_rep));
    }

    std::optional<MinimizeResult> best;
    for (const ScalarField& s : starts) {
        MinimizeResult r = descend(prob, sub, cons, s, cfg);
        if (!best || r.mu < best->mu) best = std::move(r);
    }
    return *best;
}

}  // namespace

MinimizeResult minimize_on_sphere(const ProblemData& prob, const SubcriticalParams& sub,
                                  double k, const std::optional<ScalarField>& init,
                                  const SolverConfig& cfg) {
    return minimize_dispatch(prob, sub, ConstraintSpec::sphere(k), init, cfg);
}

MinimizeResult minimize_on_band(const ProblemData& prob, const SubcriticalParams& sub,
                                double k_lo, double k_hi,
                                const std::optional<ScalarField>& init,
                                const SolverConfig& cfg) {
    return minimize_dispatch(prob, sub, ConstraintSpec::band(k_lo, k_hi), init, cfg);
}

LandscapeCurve landscape(const ProblemData& prob, const SubcriticalParams& sub,
                         std::span<const double> k_grid, const SolverConfig& cfg) {
    for (std::size_t i = 1; i < k_grid.size(); ++i)
        if (!(k_grid[i] > k_grid[i - 1]))
            throw std::invalid_argument("landscape: k_grid must be strictly ascending");

    LandscapeCurve curve{sub.q, sub.eps, {}};
    SolverConfig c = cfg;
    c.explore = true;
    std::optional<ScalarField> warm;
    for (double k : k_grid) {
        MinimizeResult r = minimize_on_sphere(prob, sub, k, warm, c);
        curve.samples.push_back({k, r.mu, r.converged});
        warm = r.minimizer;
    }
    return curve;
}

double continuity_probe(const ProblemData& prob, const SubcriticalParams& sub, double k,
                        double rel_step, const SolverConfig& cfg) {
    if (!(sub.eps > 0.0))
        throw std::invalid_argument("continuity_probe: requires eps > 0");
    if (rel_step == 0.0) return 0.0;
    MinimizeResult base = minimize_on_sphere(prob, sub, k, std::nullopt, cfg);
    SolverConfig c = cfg;
    c.explore = true;
    MinimizeResult lo =
        minimize_on_sphere(prob, sub, k * (1.0 - rel_step), base.minimizer, c);
    MinimizeResult hi =
        minimize_on_sphere(prob, sub, k * (1.0 + rel_step), base.minimizer, c);
    return std::max(std::abs(lo.mu - base.mu), std::abs(hi.mu - base.mu));
}

}  // namespace lich
