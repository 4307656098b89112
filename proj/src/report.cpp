#include "lich/report.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>

#include "lich/eigen.hpp"
#include "lich/expr.hpp"
#include "lich/solver.hpp"

namespace lich {

namespace fs = std::filesystem;

std::string format_float(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

namespace {

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);  // binary: keep LF endings
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << text;
}

std::string fmt_tick(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    return buf;
}

}  // namespace

std::string svg_polyline(const std::vector<std::pair<double, double>>& pts,
                         const std::string& x_label, const std::string& y_label) {
    const double W = 640, H = 420, ml = 70, mr = 20, mt = 20, mb = 50;
    double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin;
    double ymin = xmin, ymax = -xmin;
    for (auto [x, y] : pts) {
        xmin = std::min(xmin, x);
        xmax = std::max(xmax, x);
        ymin = std::min(ymin, y);
        ymax = std::max(ymax, y);
    }
    if (pts.empty()) {
        xmin = 0;
        xmax = 1;
        ymin = 0;
        ymax = 1;
    }
    bool logx = xmin > 0.0 && xmax / xmin > 100.0;
    auto tx = [&](double x) {
        double lo = logx ? std::log10(xmin) : xmin;
        double hi = logx ? std::log10(xmax) : xmax;
        double v = logx ? std::log10(x) : x;
        if (hi == lo) return ml;
        return ml + (W - ml - mr) * (v - lo) / (hi - lo);
    };
    if (ymax == ymin) {
        ymax += 1.0;
        ymin -= 1.0;
    }
    auto ty = [&](double y) { return H - mb - (H - mt - mb) * (y - ymin) / (ymax - ymin); };

    std::string s;
    s += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    s += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"640\" height=\"420\" "
         "viewBox=\"0 0 640 420\">\n";
    s += "<rect x=\"0\" y=\"0\" width=\"640\" height=\"420\" fill=\"white\"/>\n";

    // Axes.
    char buf[256];
    std::snprintf(buf, sizeof buf,
                  "<line x1=\"%.1f\" y1=\"%.1f\" x2=\"%.1f\" y2=\"%.1f\" stroke=\"black\"/>\n",
                  ml, H - mb, W - mr, H - mb);
    s += buf;
    std::snprintf(buf, sizeof buf,
                  "<line x1=\"%.1f\" y1=\"%.1f\" x2=\"%.1f\" y2=\"%.1f\" stroke=\"black\"/>\n",
                  ml, mt, ml, H - mb);
    s += buf;

    // Zero line when visible.
    if (ymin < 0.0 && ymax > 0.0) {
        std::snprintf(buf, sizeof buf,
                      "<line x1=\"%.1f\" y1=\"%.1f\" x2=\"%.1f\" y2=\"%.1f\" "
                      "stroke=\"#bbbbbb\"/>\n",
                      ml, ty(0.0), W - mr, ty(0.0));
        s += buf;
    }

    // Ticks.
    for (int i = 0; i <= 4; ++i) {
        double fx = xmin * std::pow(xmax / xmin, i / 4.0);
        if (!logx) fx = xmin + (xmax - xmin) * i / 4.0;
        double px = tx(fx);
        std::snprintf(buf, sizeof buf,
                      "<line x1=\"%.1f\" y1=\"%.1f\" x2=\"%.1f\" y2=\"%.1f\" stroke=\"black\"/>"
                      "<text x=\"%.1f\" y=\"%.1f\" font-size=\"11\" text-anchor=\"middle\">%s"
                      "</text>\n",
                      px, H - mb, px, H - mb + 5, px, H - mb + 18, fmt_tick(fx).c_str());
        s += buf;
        double fy = ymin + (ymax - ymin) * i / 4.0;
        double py = ty(fy);
        std::snprintf(buf, sizeof buf,
                      "<line x1=\"%.1f\" y1=\"%.1f\" x2=\"%.1f\" y2=\"%.1f\" stroke=\"black\"/>"
                      "<text x=\"%.1f\" y=\"%.1f\" font-size=\"11\" text-anchor=\"end\">%s"
                      "</text>\n",
                      ml - 5, py, ml, py, ml - 8, py + 4, fmt_tick(fy).c_str());
        s += buf;
    }
    std::snprintf(buf, sizeof buf,
                  "<text x=\"%.1f\" y=\"%.1f\" font-size=\"13\" text-anchor=\"middle\">%s"
                  "</text>\n",
                  (ml + W - mr) / 2, H - 10, x_label.c_str());
    s += buf;
    std::snprintf(buf, sizeof buf,
                  "<text x=\"15\" y=\"%.1f\" font-size=\"13\" text-anchor=\"middle\" "
                  "transform=\"rotate(-90 15 %.1f)\">%s</text>\n",
                  (mt + H - mb) / 2, (mt + H - mb) / 2, y_label.c_str());
    s += buf;

    if (!pts.empty()) {
        s += "<polyline fill=\"none\" stroke=\"#1f77b4\" stroke-width=\"1.5\" points=\"";
        for (auto [x, y] : pts) {
            std::snprintf(buf, sizeof buf, "%.2f,%.2f ", tx(x), ty(y));
            s += buf;
        }
        s += "\"/>\n";
    }
    s += "</svg>\n";
    return s;
}

void write_field(const std::string& path_base, const ScalarField& u) {
    const TorusGrid& g = u.grid();
    std::string meta;
    meta += "dim " + std::to_string(g.dim()) + "\n";
    meta += "points_per_axis " + std::to_string(g.points_per_axis()) + "\n";
    meta += "spacing " + format_float(g.spacing()) + "\n";
    meta += "count " + std::to_string(g.size()) + "\n";
    meta += "order axis1-fastest\n";
    meta += "encoding float64 little-endian\n";
    write_text(path_base + ".meta", meta);

    std::ofstream bin(path_base + ".f64", std::ios::binary);
    if (!bin) throw std::runtime_error("cannot write " + path_base + ".f64");
    auto v = u.values();
    bin.write(reinterpret_cast<const char*>(v.data()),
              static_cast<std::streamsize>(v.size() * sizeof(double)));
}

namespace {

struct Instance {
    TorusGrid grid;
    ProblemData prob;
    SolverConfig solver;
    bool f_warning = false;
    bool a_warning = false;
};

Instance build_instance(const RunConfig& cfg, std::uint64_t seed) {
    TorusGrid grid(cfg.n, cfg.points_per_axis);
    GridEval f = eval_on_grid(parse_expr(cfg.f_expr), grid);
    GridEval a = eval_on_grid(parse_expr(cfg.a_expr), grid);
    ProblemData prob = ProblemData::make(grid, cfg.p, cfg.h, f.field, a.field);
    SolverConfig sc;
    sc.tol_grad = cfg.tol_grad;
    sc.tol_energy = cfg.tol_energy;
    sc.max_iters = cfg.max_iters;
    sc.seed = seed;
    sc.delta_reg = cfg.delta_reg;
    sc.tol_residual = cfg.tol_residual;
    sc.path_nodes = cfg.path_nodes;
    return Instance{grid, std::move(prob), sc, f.periodic_warning, a.periodic_warning};
}

double scenario_q(const RunConfig& cfg, const ProblemData& prob) {
    if (cfg.q > 0.0) return cfg.q;
    return 0.5 * (prob.p_flat + prob.p_star);
}

GateInputs make_gate_inputs(const Instance& inst, const RunConfig& cfg) {
    GateInputs gi{};
    gi.lambda_f = lambda_f(inst.prob, inst.solver).lambda;
    gi.eta0 = cfg.eta0;
    gi.K = sobolev_K(inst.prob.n, inst.prob.p);
    gi.A = calibrate_A(inst.grid, inst.prob.p, 1.0, 8);
    gi.mu_hat = cfg.mu_hat;
    gi.k_starstar = cfg.k_starstar;
    return gi;
}

std::vector<double> landscape_grid(const RunConfig& cfg, const ProblemData& prob) {
    CoefficientStats st = coefficient_stats(prob);
    double q = scenario_q(cfg, prob);
    double k_ref;
    if (st.int_f_minus_abs > 0.0 && st.sup_f > 0.0)
        k_ref = k0(prob.p, q, prob.h, st.int_f_minus_abs);
    else if (st.int_f < 0.0)
        k_ref = k0_theorem2(prob.p, q, prob.h, st.int_f);
    else
        k_ref = 1.0;
    double k_min = cfg.k_min > 0.0 ? cfg.k_min : k_ref / 64.0;
    double k_max = cfg.k_max > 0.0 ? cfg.k_max : k_ref * 64.0;
    int m = cfg.k_samples;
    std::vector<double> ks;
    for (int i = 0; i < m; ++i)
        ks.push_back(m == 1 ? k_min
                            : k_min * std::pow(k_max / k_min, static_cast<double>(i) / (m - 1)));
    return ks;
}

int run_landscape(const Instance& inst, const RunConfig& cfg, const fs::path& dir) {
    std::vector<double> ks = landscape_grid(cfg, inst.prob);
    SubcriticalParams sub = SubcriticalParams::make(scenario_q(cfg, inst.prob), cfg.eps);
    LandscapeCurve curve = landscape(inst.prob, sub, ks, inst.solver);

    std::string csv = "k,mu,converged\n";
    std::vector<std::pair<double, double>> pts;
    bool all_ok = true;
    for (const auto& s : curve.samples) {
        csv += format_float(s.k) + "," + format_float(s.mu) + "," + (s.converged ? "1" : "0") +
               "\n";
        pts.emplace_back(s.k, s.mu);
        all_ok = all_ok && s.converged;
    }
    write_text(dir / "landscape.csv", csv);
    write_text(dir / "landscape.svg", svg_polyline(pts, "k", "mu"));
    return exit_ok;  // individual samples may carry flags without failing the scan
}

int run_eigen(const Instance& inst, const RunConfig& cfg, const fs::path& dir) {
    std::vector<double> etas = cfg.eta_list;
    if (etas.empty()) etas = {0.125, 0.25, 0.5, 1.0, 1.5};
    SubcriticalParams sub = SubcriticalParams::make(scenario_q(cfg, inst.prob), cfg.eps);
    EigenResult lf = lambda_f(inst.prob, inst.solver);
    double delta = cfg.delta > 0.0 ? cfg.delta : 0.1 * (1.0 + std::abs(lf.lambda));

    std::string csv = "eta,lambda\n";
    bool ok = true;
    if (std::isfinite(lf.lambda)) {
        EtaScanResult scan = eta_scan(inst.prob, sub, etas, delta, inst.solver);
        for (auto [eta, lam] : scan.samples)
            csv += format_float(eta) + "," + format_float(lam) + "\n";
    } else {
        for (double eta : etas) {
            EigenResult r = lambda_f_eta_q(inst.prob, sub, eta, false, inst.solver);
            csv += format_float(eta) + "," + format_float(r.lambda) + "\n";
            ok = ok && r.converged;
        }
    }
    csv += "lambda_f," + format_float(lf.lambda) + "\n";
    write_text(dir / "eigen.csv", csv);
    return ok ? exit_ok : exit_nonconvergence;
}

int run_thresholds(const Instance& inst, const RunConfig& cfg, const fs::path& dir) {
    const ProblemData& prob = inst.prob;
    CoefficientStats st = coefficient_stats(prob);
    GateInputs gi = make_gate_inputs(inst, cfg);

    TheoremCase tc = TheoremCase::thm1;
    if (st.sup_f < 0.0) tc = TheoremCase::thm2_case2;
    else if (st.sup_f == 0.0) tc = TheoremCase::thm2_case1;
    ThresholdReport rep = theorem_gate(prob, tc, gi);

    double q = scenario_q(cfg, prob);
    if (st.int_f_minus_abs > 0.0) {
        rep.constants.emplace_back("k0", k0(prob.p, q, prob.h, st.int_f_minus_abs));
        rep.constants.emplace_back("phi_q", phi_q(prob.p, q, prob.h, st.int_f_minus_abs));
        auto [k1, k2] = k1q_k2q(prob.n, prob.p, q, prob.h, gi.eta0, st.int_f_minus_abs);
        rep.constants.emplace_back("k1q", k1);
        rep.constants.emplace_back("k2q", k2);
        rep.constants.emplace_back(
            "mu_k0_upper_bound",
            mu_k0_upper_bound(prob.n, prob.p, prob.h, st.int_f_minus_abs, st.int_f_plus));
    }
    if (st.int_f < 0.0)
        rep.constants.emplace_back("k0_theorem2", k0_theorem2(prob.p, q, prob.h, st.int_f));
    if (st.inf_f < 0.0)
        rep.constants.emplace_back(
            "lemma22_lower_bound",
            lemma22_lower_bound(prob.p, prob.p_flat, prob.h, st.inf_f));

    write_text(dir / "thresholds.csv", rep.to_csv());
    write_text(dir / "thresholds.txt", rep.to_text());
    return rep.overall ? exit_ok : exit_gate_failed;
}

void write_solve_report(const fs::path& dir, const std::string& name, const SolveReport& rep) {
    write_field((dir / name).string(), rep.u);
    std::string csv = "metric,value\n";
    auto row = [&csv](const std::string& k, double v) {
        csv += k + "," + format_float(v) + "\n";
    };
    const char* branch =
        rep.branch == SolveReport::Branch::negative_energy
            ? "negative_energy"
            : (rep.branch == SolveReport::Branch::mountain_pass ? "mountain_pass" : "single");
    csv += std::string("branch,") + branch + "\n";
    row("critical_energy", rep.critical_energy);
    row("k_attained", rep.k_attained);
    row("weak_residual", rep.weak_residual_value);
    row("min_u", rep.min_u);
    row("lemma22_bound", rep.lemma22_bound);
    row("distinctness", rep.distinctness);
    row("multiplier", rep.multiplier);
    csv += std::string("converged,") + (rep.converged ? "1" : "0") + "\n";
    for (std::size_t j = 0; j < rep.energy_at_stage.size(); ++j)
        row("energy_stage_" + std::to_string(j), rep.energy_at_stage[j]);
    write_text(dir / (name + "_metrics.csv"), csv);
}

int run_solve(const Instance& inst, const RunConfig& cfg, const fs::path& dir) {
    const ProblemData& prob = inst.prob;
    CoefficientStats st = coefficient_stats(prob);
    GateInputs gi = make_gate_inputs(inst, cfg);

    PipelineSetup setup;
    setup.gate = gi;
    setup.schedule = ContinuationSchedule::geometric(prob, cfg.eps0, cfg.stages, cfg.q_start);
    setup.k_star = cfg.k_star;
    setup.band_hi = cfg.band_hi;

    PipelineResult res;
    if (st.sup_f > 0.0) {
        res = two_solution_pipeline(prob, setup, inst.solver);
    } else {
        TheoremCase tc = st.sup_f < 0.0 ? TheoremCase::thm2_case2 : TheoremCase::thm2_case1;
        res = single_solution_pipeline(prob, setup, tc, inst.solver);
    }

    write_text(dir / "gate.csv", res.gate_report.to_csv());
    write_text(dir / "gate.txt", res.gate_report.to_text());
    {
        std::string log;
        for (const std::string& line : res.stage_log) log += line + "\n";
        write_text(dir / "stage_log.txt", log);
    }
    if (!res.gate_passed) return exit_gate_failed;

    write_solve_report(dir, "branch1", res.branch1);
    bool ok = res.branch1.converged;
    if (st.sup_f > 0.0) {
        write_solve_report(dir, "branch2", res.branch2);
        ok = ok && res.branch2.converged;
    }
    return ok ? exit_ok : exit_nonconvergence;
}

int run_nonexist(const Instance& inst, const RunConfig& cfg, const fs::path& dir) {
    const ProblemData& prob = inst.prob;
    CoefficientStats st = coefficient_stats(prob);
    GateInputs gi = make_gate_inputs(inst, cfg);

    double Lambda = cfg.Lambda;
    if (Lambda <= 0.0)
        Lambda = C2_and_Lambda(prob.n, prob.p, prob.h, gi.K, gi.A, cfg.mu_hat, cfg.k_starstar,
                               std::max(st.sup_f, 0.0))
                     .Lambda;
    NonexistenceVerdict v =
        nonexistence_check(prob.n, prob.p, gi.K, gi.A, Lambda, prob.a, prob.f);

    // Companion run: a norm-capped solve in the excluded region cannot
    // converge; report its flag.
    SolverConfig sc = inst.solver;
    sc.norm_cap = Lambda;
    sc.max_iters = std::min(sc.max_iters, 2000);
    sc.explore = true;
    double q = scenario_q(cfg, prob);
    double k_ref = st.int_f < 0.0 ? k0_theorem2(prob.p, q, prob.h, st.int_f) : 1.0;
    MinimizeResult capped = minimize_on_band(prob, SubcriticalParams::make(q, cfg.eps),
                                             k_ref / 8.0, k_ref * 8.0, std::nullopt, sc);
    double resid = weak_residual(capped.minimizer, prob, SubcriticalParams::make(q, cfg.eps),
                                 sc.resolved_delta_reg(prob.p));
    bool solver_flagged = !capped.converged || resid > cfg.tol_residual;

    std::string csv = "name,value\n";
    csv += "Lambda," + format_float(Lambda) + "\n";
    csv += "lhs," + format_float(v.lhs) + "\n";
    csv += "rhs," + format_float(v.rhs) + "\n";
    csv += std::string("nonexistence_below_Lambda,") + (v.nonexistence_below_Lambda ? "1" : "0") +
           "\n";
    csv += std::string("capped_solver_flagged,") + (solver_flagged ? "1" : "0") + "\n";
    csv += "capped_solver_residual," + format_float(resid) + "\n";
    write_text(dir / "nonexist.csv", csv);
    return exit_ok;
}

int run_continuity(const Instance& inst, const RunConfig& cfg, const fs::path& dir) {
    const ProblemData& prob = inst.prob;
    double q = scenario_q(cfg, prob);
    CoefficientStats st = coefficient_stats(prob);
    double k = cfg.k;
    if (k <= 0.0) {
        if (st.int_f_minus_abs > 0.0 && st.sup_f > 0.0)
            k = k0(prob.p, q, prob.h, st.int_f_minus_abs);
        else if (st.int_f < 0.0)
            k = k0_theorem2(prob.p, q, prob.h, st.int_f);
        else
            k = 1.0;
    }
    double jump =
        continuity_probe(prob, SubcriticalParams::make(q, cfg.eps), k, cfg.rel_step, inst.solver);
    std::string csv = "name,value\n";
    csv += "k," + format_float(k) + "\n";
    csv += "rel_step," + format_float(cfg.rel_step) + "\n";
    csv += "max_jump," + format_float(jump) + "\n";
    write_text(dir / "continuity.csv", csv);
    return exit_ok;
}

}  // namespace

int run_scenario(const RunConfig& cfg, const std::string& out_dir, std::uint64_t seed_override,
                 bool has_seed_override) {
    fs::path dir = out_dir.empty() ? fs::path(cfg.directory) : fs::path(out_dir);
    fs::create_directories(dir);
    Instance inst = build_instance(cfg, has_seed_override ? seed_override : cfg.seed);
    if (inst.f_warning || inst.a_warning) {
        std::string w;
        if (inst.f_warning) w += "warning: f looks non-periodic at the seam\n";
        if (inst.a_warning) w += "warning: a looks non-periodic at the seam\n";
        std::ofstream(dir / "warnings.txt", std::ios::binary) << w;
    }
    if (cfg.scenario == "landscape") return run_landscape(inst, cfg, dir);
    if (cfg.scenario == "eigen") return run_eigen(inst, cfg, dir);
    if (cfg.scenario == "thresholds") return run_thresholds(inst, cfg, dir);
    if (cfg.scenario == "solve") return run_solve(inst, cfg, dir);
    if (cfg.scenario == "nonexist") return run_nonexist(inst, cfg, dir);
    if (cfg.scenario == "continuity") return run_continuity(inst, cfg, dir);
    return exit_config_error;
}

}  // namespace lich
