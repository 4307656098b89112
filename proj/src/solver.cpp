#include "lich/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "lich/operators.hpp"

namespace lich {

namespace {

const double kInf = std::numeric_limits<double>::infinity();

double q_mass(const ScalarField& u, double q) {
    std::vector<double> w(static_cast<std::size_t>(u.size()));
    for (std::int64_t i = 0; i < u.size(); ++i)
        w[static_cast<std::size_t>(i)] = std::pow(std::abs(u[i]), q);
    return u.grid().cell_weight() * pairwise_sum(w);
}

double sobolev_norm(const ScalarField& u, double p, double dreg) {
    double gp = grad_energy(u, p, dreg);
    std::vector<double> w(static_cast<std::size_t>(u.size()));
    for (std::int64_t i = 0; i < u.size(); ++i)
        w[static_cast<std::size_t>(i)] = std::pow(std::abs(u[i]), p);
    return std::pow(gp + u.grid().cell_weight() * pairwise_sum(w), 1.0 / p);
}

double lq_distance(const ScalarField& a, const ScalarField& b, double q) {
    ScalarField d = a;
    for (std::int64_t i = 0; i < d.size(); ++i) d[i] -= b[i];
    return lp_norm(d, q);
}

ScalarField rescaled_to(const ScalarField& u, double q, double k) {
    ScalarField v = u;
    double m = q_mass(v, q);
    double s = std::pow(k / m, 1.0 / q);
    for (std::int64_t i = 0; i < v.size(); ++i) v[i] *= s;
    return v;
}

}  // namespace

ContinuationSchedule ContinuationSchedule::geometric(const ProblemData& prob, double eps0,
                                                     int n_stages, double q_start) {
    if (q_start <= 0.0) q_start = 0.5 * (prob.p_flat + prob.p_star);
    if (!(q_start > prob.p_flat && q_start < prob.p_star))
        throw std::invalid_argument("schedule: q_start must lie in (p_flat, p_star)");
    if (!(eps0 > 0.0) || n_stages < 1)
        throw std::invalid_argument("schedule: need eps0 > 0 and at least one stage");
    ContinuationSchedule s;
    for (int j = 0; j < n_stages; ++j) {
        double eps = eps0 * std::pow(2.0, -j);
        double q = prob.p_star - (prob.p_star - q_start) * std::pow(2.0, -j);
        s.stages.emplace_back(eps, q);
    }
    return s;
}

RescaleResult rescale_problem(const ProblemData& prob, double eta0) {
    CoefficientStats st = coefficient_stats(prob);
    if (!(st.int_f_minus_abs > 0.0))
        throw std::invalid_argument("rescale_problem: degenerate, int |f^-| vanishes");
    double gap = prob.p_star - prob.p;
    double base = prob.p_star * std::abs(prob.h) / (eta0 * st.int_f_minus_abs);
    double c = std::pow(base, 1.0 / gap);
    double c_other = std::pow(base, 1.0 / (2.0 * gap));

    double cf = std::pow(c, gap);
    double ca = std::pow(c, prob.p_star + prob.p);
    ScalarField f = prob.f, a = prob.a;
    for (std::int64_t i = 0; i < f.size(); ++i) f[i] *= cf;
    for (std::int64_t i = 0; i < a.size(); ++i) a[i] /= ca;
    return {ProblemData::make(prob.f.grid(), prob.p, prob.h, std::move(f), std::move(a)), c,
            c_other};
}

double weak_residual(const ScalarField& u, const ProblemData& prob,
                     const SubcriticalParams& sub, double delta_reg) {
    ScalarField G = first_variation(u, prob, sub, delta_reg);
    if (!G.all_finite()) return kInf;
    double norm = std::sqrt(inner(G, G));
    return norm / (1.0 + std::pow(sobolev_norm(u, prob.p, delta_reg), prob.p - 1.0));
}

IdentityCheck integral_identity_check(const ScalarField& u, const ProblemData& prob) {
    const double ps = prob.p_star;
    ScalarField lhs_f(u.grid()), rhs_f(u.grid());
    for (std::int64_t i = 0; i < u.size(); ++i) {
        lhs_f[i] = prob.h * std::pow(u[i], prob.p - 1.0);
        rhs_f[i] = prob.f[i] * std::pow(u[i], ps - 1.0) + prob.a[i] * std::pow(u[i], -ps - 1.0);
    }
    IdentityCheck out{};
    out.lhs = integrate(lhs_f);
    out.rhs = integrate(rhs_f);
    out.gap = std::abs(out.lhs - out.rhs) / (1.0 + std::max(std::abs(out.lhs), std::abs(out.rhs)));
    out.contradiction_flag = prob.f.min_value() >= 0.0 && prob.h < 0.0;
    return out;
}

namespace {

/// Sphere solve used inside the saddle refinement: stays in the current
/// basin and targets a gradient tolerance matched to the iterate's scale.
MinimizeResult basin_sphere_solve(const ProblemData& prob, const SubcriticalParams& sub,
                                  double k, const ScalarField& init, const SolverConfig& cfg,
                                  double tol_grad) {
    SolverConfig c = cfg;
    c.explore = false;
    c.tol_grad = tol_grad;
    std::optional<ScalarField> w = rescaled_to(init, sub.q, k);
    return minimize_on_sphere(prob, sub, k, w, c);
}

struct SaddlePolish {
    MinimizeResult result;
    bool bracketed = false;
};

/// The transition state sits where the landscape value is locally maximal in
/// k, i.e. where the sphere multiplier changes sign. Bisection on that sign,
/// warm-starting each sphere solve from the current saddle iterate.
SaddlePolish polish_saddle(const ProblemData& prob, const SubcriticalParams& sub,
                           const ScalarField& start, const SolverConfig& cfg) {
    const double dreg = cfg.resolved_delta_reg(prob.p);

    auto grad_tol_for = [&](const ScalarField& u) {
        double denom = 1.0 + std::pow(sobolev_norm(u, prob.p, dreg), prob.p - 1.0);
        return std::max(cfg.tol_grad, 0.1 * cfg.tol_residual * denom);
    };

    double k = q_mass(start, sub.q);
    MinimizeResult cur = basin_sphere_solve(prob, sub, k, start, cfg, grad_tol_for(start));
    SaddlePolish out{cur, false};

    ScalarField iter = cur.minimizer;
    double k_prev = cur.k_attained;
    double lam_prev = cur.multiplier;
    double factor = lam_prev > 0.0 ? 2.0 : 0.5;

    double k_lo = 0.0, k_hi = 0.0;
    for (int step = 0; step < 60; ++step) {
        double k_next = k_prev * factor;
        MinimizeResult r = basin_sphere_solve(prob, sub, k_next, iter, cfg, grad_tol_for(iter));
        iter = r.minimizer;
        if ((lam_prev > 0.0) != (r.multiplier > 0.0)) {
            k_lo = std::min(k_prev, k_next);
            k_hi = std::max(k_prev, k_next);
            out.bracketed = true;
            out.result = r;
            break;
        }
        k_prev = k_next;
        lam_prev = r.multiplier;
        out.result = r;
    }
    if (!out.bracketed) return out;

    for (int it = 0; it < 80; ++it) {
        double km = std::sqrt(k_lo * k_hi);
        MinimizeResult r = basin_sphere_solve(prob, sub, km, iter, cfg, grad_tol_for(iter));
        iter = r.minimizer;
        out.result = r;
        double res = weak_residual(r.minimizer, prob, sub, dreg);
        if (res <= cfg.tol_residual) {
            out.result.converged = true;
            break;
        }
        if (r.multiplier > 0.0) k_lo = km;
        else k_hi = km;
        if (k_hi / k_lo < 1.0 + 1e-15) break;
    }
    return out;
}

PathState make_initial_path(const ScalarField& u_A, const ScalarField& u_B, double q, int m) {
    PathState path;
    double kA = q_mass(u_A, q), kB = q_mass(u_B, q);
    for (int i = 0; i < m; ++i) {
        double alpha = static_cast<double>(i) / (m - 1);
        ScalarField w = u_A;
        for (std::int64_t j = 0; j < w.size(); ++j)
            w[j] = std::abs((1.0 - alpha) * u_A[j] + alpha * u_B[j]);
        double ki = std::exp((1.0 - alpha) * std::log(kA) + alpha * std::log(kB));
        path.nodes.push_back(rescaled_to(w, q, ki));
    }
    return path;
}

void respace_path(PathState& path, double q) {
    const int m = static_cast<int>(path.nodes.size());
    std::vector<double> arc(m, 0.0);
    for (int i = 1; i < m; ++i) {
        ScalarField d = path.nodes[i];
        for (std::int64_t j = 0; j < d.size(); ++j) d[j] -= path.nodes[i - 1][j];
        arc[i] = arc[i - 1] + std::sqrt(inner(d, d));
    }
    if (arc[m - 1] <= 0.0) return;

    std::vector<ScalarField> fresh;
    fresh.push_back(path.nodes.front());
    for (int i = 1; i < m - 1; ++i) {
        double target = arc[m - 1] * i / (m - 1);
        int seg = 1;
        while (seg < m - 1 && arc[seg] < target) ++seg;
        double t = (target - arc[seg - 1]) / std::max(arc[seg] - arc[seg - 1], 1e-300);
        ScalarField w = path.nodes[seg - 1];
        for (std::int64_t j = 0; j < w.size(); ++j)
            w[j] = std::abs((1.0 - t) * path.nodes[seg - 1][j] + t * path.nodes[seg][j]);
        if (q_mass(w, q) > 0.0) fresh.push_back(std::move(w));
        else fresh.push_back(path.nodes[seg]);
    }
    fresh.push_back(path.nodes.back());
    path.nodes = std::move(fresh);
    (void)q;
}

}  // namespace

SolveReport mountain_pass(const ProblemData& prob, const SubcriticalParams& sub,
                          const ScalarField& u_A, const ScalarField& u_B,
                          const SolverConfig& cfg) {
    const double q = sub.q;
    const double dreg = cfg.resolved_delta_reg(prob.p);
    SolveReport rep(u_A.grid());
    rep.branch = SolveReport::Branch::mountain_pass;

    if (lq_distance(u_A, u_B, q) <= 1e-14 * (1.0 + lp_norm(u_A, q))) {
        rep.u = u_A;
        rep.k_attained = q_mass(u_A, q);
        rep.critical_energy = energy(u_A, prob, sub, dreg);
        rep.converged = false;  // degenerate: zero path length
        return rep;
    }

    const int m = std::max(cfg.path_nodes, 5);
    PathState path = make_initial_path(u_A, u_B, q, m);
    const double EA = energy(u_A, prob, sub, dreg);
    const double EB = energy(u_B, prob, sub, dreg);

    double t = 0.0;
    bool collapsed = false;
    for (int outer = 0; outer < cfg.path_max_outer; ++outer) {
        int jmax = 1;
        double Emax = -kInf;
        for (int i = 1; i + 1 < m; ++i) {
            double Ei = energy(path.nodes[i], prob, sub, dreg);
            if (Ei > Emax) {
                Emax = Ei;
                jmax = i;
            }
        }
        path.max_index = jmax;
        path.max_energy = Emax;

        if (Emax <= std::max(EA, EB) + 1e-12 * (1.0 + std::abs(Emax))) {
            collapsed = true;  // barrier node slid into an endpoint basin
            break;
        }

        ScalarField G = first_variation(path.nodes[jmax], prob, sub, dreg);
        ScalarField tau = path.nodes[jmax + 1];
        for (std::int64_t j = 0; j < tau.size(); ++j) tau[j] -= path.nodes[jmax - 1][j];
        double tn = std::sqrt(inner(tau, tau));
        if (tn > 0.0)
            for (std::int64_t j = 0; j < tau.size(); ++j) tau[j] /= tn;
        double gt = inner(G, tau);
        ScalarField d = G;
        for (std::int64_t j = 0; j < d.size(); ++j) d[j] -= gt * tau[j];
        double dn = std::sqrt(inner(d, d));

        double loc_tol = std::max(cfg.tol_grad, 1e-3 * (1.0 + std::abs(Emax)));
        if (dn <= loc_tol) break;

        if (t <= 0.0) t = 0.1 / (dn + 1e-30);
        bool accepted = false;
        for (int bt = 0; bt < 50; ++bt) {
            ScalarField v = path.nodes[jmax];
            for (std::int64_t j = 0; j < v.size(); ++j) v[j] = std::abs(v[j] - t * d[j]);
            double Ev = energy(v, prob, sub, dreg);
            if (std::isfinite(Ev) && Ev <= Emax - 1e-4 * t * dn * dn) {
                path.nodes[jmax] = v;
                accepted = true;
                t *= 2.0;
                break;
            }
            t *= 0.5;
        }
        if (!accepted) break;
        if ((outer + 1) % 10 == 0) respace_path(path, q);
    }

    SaddlePolish polish = polish_saddle(prob, sub, path.nodes[path.max_index], cfg);
    rep.u = polish.result.minimizer;
    rep.k_attained = polish.result.k_attained;
    rep.multiplier = polish.result.multiplier;
    rep.critical_energy = polish.result.mu;
    rep.weak_residual_value = weak_residual(rep.u, prob, sub, dreg);
    rep.min_u = rep.u.min_value();
    rep.converged = !collapsed && rep.weak_residual_value <= cfg.tol_residual;
    return rep;
}

namespace {

void finalize_report(SolveReport& rep, const ProblemData& prob, const SolverConfig& cfg) {
    const double dreg = cfg.resolved_delta_reg(prob.p);
    SubcriticalParams crit{prob.p_star, 0.0};
    rep.critical_energy = critical_energy(rep.u, prob, dreg);
    rep.k_attained = q_mass(rep.u, prob.p_star);
    rep.weak_residual_value = weak_residual(rep.u, prob, crit, dreg);
    rep.min_u = rep.u.min_value();
    CoefficientStats st = coefficient_stats(prob);
    rep.lemma22_bound =
        st.inf_f < 0.0 ? lemma22_lower_bound(prob.p, prob.p_flat, prob.h, st.inf_f) : 0.0;
    rep.converged = rep.converged && rep.weak_residual_value <= cfg.tol_residual;
}

}  // namespace

PipelineResult two_solution_pipeline(const ProblemData& prob, const PipelineSetup& setup,
                                     const SolverConfig& cfg) {
    PipelineResult out;
    out.gate_report = theorem_gate(prob, TheoremCase::thm1, setup.gate);
    out.gate_passed = out.gate_report.overall;
    out.branch1 = SolveReport(prob.f.grid());
    out.branch2 = SolveReport(prob.f.grid());
    out.branch1.branch = SolveReport::Branch::negative_energy;
    out.branch2.branch = SolveReport::Branch::mountain_pass;
    if (!out.gate_passed) {
        out.stage_log.push_back("gate failed; pipeline aborted");
        return out;
    }

    CoefficientStats st = coefficient_stats(prob);
    const double F = st.int_f_minus_abs;
    const double eta0 = setup.gate.eta0;
    const double dreg = cfg.resolved_delta_reg(prob.p);

    const auto& stages = setup.schedule.stages;
    double k_star = setup.k_star;
    if (k_star <= 0.0) k_star = k0(prob.p, stages.front().second, prob.h, F) / 16.0;

    std::optional<ScalarField> warm1;
    std::optional<ScalarField> warm_saddle;
    bool b1_ok = true, b2_ok = true;

    SolverConfig stage_cfg = cfg;
    stage_cfg.explore = true;

    for (const auto& [eps_j, q_j] : stages) {
        if (st.int_a > phi_q(prob.p, q_j, prob.h, F)) {
            out.stage_log.push_back("stage q=" + std::to_string(q_j) +
                                    " skipped: integral bound on a fails at this exponent");
            continue;
        }
        SubcriticalParams sub{q_j, eps_j};
        auto [k1, k2] = k1q_k2q(prob.n, prob.p, q_j, prob.h, eta0, F);
        double k0_val = k0(prob.p, q_j, prob.h, F);

        MinimizeResult b1 = minimize_on_band(prob, sub, k_star, k1, warm1, stage_cfg);
        warm1 = b1.minimizer;
        out.branch1.energy_at_stage.push_back(b1.mu);
        b1_ok = b1_ok && b1.converged;

        // Anchor bisections need one negative landscape value below k1.
        double k_neg = b1.k_attained;
        double mu_neg = b1.mu;
        if (!(mu_neg < 0.0)) {
            MinimizeResult probe = minimize_on_sphere(prob, sub, k0_val, warm1, stage_cfg);
            k_neg = probe.k_attained;
            mu_neg = probe.mu;
        }
        if (!(mu_neg < 0.0)) {
            out.stage_log.push_back("stage q=" + std::to_string(q_j) +
                                    ": no negative landscape value located; saddle skipped");
            b2_ok = false;
            continue;
        }

        auto sphere_mu = [&](double k, std::optional<ScalarField>& warm) {
            MinimizeResult r = minimize_on_sphere(prob, sub, k, warm, stage_cfg);
            warm = r.minimizer;
            return r;
        };

        // Lower anchor: zero crossing in (k_neg, k1]; ties to the smaller k.
        std::optional<ScalarField> wa = warm1;
        double lo = k_neg, hi = k1;
        MinimizeResult anchor_A = sphere_mu(lo, wa);
        for (int it = 0; it < 30 && hi / lo > 1.0 + 1e-9; ++it) {
            double km = std::sqrt(lo * hi);
            MinimizeResult r = sphere_mu(km, wa);
            if (r.mu <= 0.0) {
                lo = km;
                anchor_A = r;
            } else {
                hi = km;
            }
        }

        // Upper anchor: expand beyond k2 until the landscape turns negative.
        double cap = setup.anchor_k_cap > 0.0 ? setup.anchor_k_cap : k2 * std::pow(2.0, 60);
        std::optional<ScalarField> wb = warm_saddle ? warm_saddle : wa;
        double k_up = k2;
        MinimizeResult up = sphere_mu(k_up, wb);
        double k_pos = k_up;
        while (up.mu > 0.0 && k_up < cap) {
            k_pos = k_up;
            k_up *= 4.0;
            up = sphere_mu(k_up, wb);
        }
        if (!(up.mu <= 0.0)) {
            out.stage_log.push_back("stage q=" + std::to_string(q_j) +
                                    ": upper anchor not bracketed; saddle skipped");
            b2_ok = false;
            continue;
        }
        MinimizeResult anchor_B = up;
        double k_negu = k_up;
        for (int it = 0; it < 30 && k_negu / k_pos > 1.0 + 1e-9; ++it) {
            double km = std::sqrt(k_pos * k_negu);
            MinimizeResult r = sphere_mu(km, wb);
            if (r.mu <= 0.0) {
                k_negu = km;
                anchor_B = r;
            } else {
                k_pos = km;
            }
        }

        SolveReport saddle(prob.f.grid());
        bool reused = false;
        if (warm_saddle) {
            // Continuation: re-polish the previous transition state first.
            SaddlePolish sp = polish_saddle(prob, sub, *warm_saddle, cfg);
            if (sp.bracketed && sp.result.mu > 0.0) {
                saddle.u = sp.result.minimizer;
                saddle.k_attained = sp.result.k_attained;
                saddle.critical_energy = sp.result.mu;
                saddle.multiplier = sp.result.multiplier;
                saddle.weak_residual_value = weak_residual(saddle.u, prob, sub, dreg);
                saddle.converged = saddle.weak_residual_value <= cfg.tol_residual;
                reused = true;
            }
        }
        if (!reused)
            saddle = mountain_pass(prob, sub, anchor_A.minimizer, anchor_B.minimizer, cfg);

        warm_saddle = saddle.u;
        out.branch2.energy_at_stage.push_back(saddle.critical_energy);
        b2_ok = b2_ok && saddle.converged;
    }

    // Extrapolation: one eps = 0 solve at the critical exponent per branch.
    SubcriticalParams crit{prob.p_star, 0.0};
    if (warm1) {
        auto [k1c, k2c] = k1q_k2q(prob.n, prob.p, prob.p_star, prob.h, eta0, F);
        (void)k2c;
        MinimizeResult fin = minimize_on_band(prob, crit, k_star, k1c, warm1, stage_cfg);
        out.branch1.u = fin.minimizer;
        out.branch1.multiplier = fin.multiplier;
        out.branch1.converged = b1_ok && fin.converged;
        out.branch1.energy_at_stage.push_back(fin.mu);
    } else {
        out.branch1.converged = false;
    }
    if (warm_saddle) {
        SaddlePolish sp = polish_saddle(prob, crit, *warm_saddle, cfg);
        out.branch2.u = sp.result.minimizer;
        out.branch2.multiplier = sp.result.multiplier;
        out.branch2.converged = b2_ok && sp.bracketed;
        out.branch2.energy_at_stage.push_back(sp.result.mu);
    } else {
        out.branch2.converged = false;
    }

    finalize_report(out.branch1, prob, cfg);
    finalize_report(out.branch2, prob, cfg);
    double dist = lq_distance(out.branch1.u, out.branch2.u, prob.p_star);
    out.branch1.distinctness = dist;
    out.branch2.distinctness = dist;
    return out;
}

PipelineResult single_solution_pipeline(const ProblemData& prob, const PipelineSetup& setup,
                                        TheoremCase which, const SolverConfig& cfg) {
    PipelineResult out;
    out.gate_report = theorem_gate(prob, which, setup.gate);
    out.gate_passed = out.gate_report.overall;
    out.branch1 = SolveReport(prob.f.grid());
    out.branch1.branch = SolveReport::Branch::single;
    out.branch2 = SolveReport(prob.f.grid());
    if (!out.gate_passed) {
        out.stage_log.push_back("gate failed; pipeline aborted");
        return out;
    }

    CoefficientStats st = coefficient_stats(prob);
    const auto& stages = setup.schedule.stages;

    double k_ref = 1.0;
    if (st.int_f < 0.0) k_ref = k0_theorem2(prob.p, stages.front().second, prob.h, st.int_f);
    double k_star = setup.k_star > 0.0 ? setup.k_star : k_ref / 64.0;
    double band_hi = setup.band_hi > 0.0 ? setup.band_hi : k_ref * 64.0;

    SolverConfig stage_cfg = cfg;
    stage_cfg.explore = true;

    std::optional<ScalarField> warm;
    bool ok = true;
    for (const auto& [eps_j, q_j] : stages) {
        SubcriticalParams sub{q_j, eps_j};
        MinimizeResult r = minimize_on_band(prob, sub, k_star, band_hi, warm, stage_cfg);
        warm = r.minimizer;
        out.branch1.energy_at_stage.push_back(r.mu);
        ok = ok && r.converged;
    }
    SubcriticalParams crit{prob.p_star, 0.0};
    MinimizeResult fin = minimize_on_band(prob, crit, k_star, band_hi, warm, stage_cfg);
    out.branch1.u = fin.minimizer;
    out.branch1.multiplier = fin.multiplier;
    out.branch1.converged = ok && fin.converged;
    out.branch1.energy_at_stage.push_back(fin.mu);
    finalize_report(out.branch1, prob, cfg);
    return out;
}

}  // namespace lich
