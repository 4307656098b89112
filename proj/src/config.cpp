#include "lich/config.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace lich {

namespace {

std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

double parse_double(const std::string& v, int line) {
    try {
        std::size_t used = 0;
        double x = std::stod(v, &used);
        if (used != v.size()) throw ConfigError("trailing characters in number '" + v + "'", line);
        return x;
    } catch (const ConfigError&) {
        throw;
    } catch (...) {
        throw ConfigError("malformed number '" + v + "'", line);
    }
}

int parse_int(const std::string& v, int line) {
    double d = parse_double(v, line);
    int i = static_cast<int>(d);
    if (d != i) throw ConfigError("expected an integer, got '" + v + "'", line);
    return i;
}

std::vector<double> parse_list(const std::string& v, int line) {
    std::vector<double> out;
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(parse_double(item, line));
    }
    return out;
}

std::vector<std::string> parse_words(const std::string& v) {
    std::vector<std::string> out;
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace

RunConfig parse_config_text(const std::string& text) {
    RunConfig cfg;
    std::set<std::string> seen;
    std::string section;
    std::istringstream in(text);
    std::string raw;
    int lineno = 0;

    const std::set<std::string> sections = {"manifold", "problem", "solver", "scenario",
                                            "output"};

    while (std::getline(in, raw)) {
        ++lineno;
        std::string line = raw;
        std::size_t hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;

        if (line.front() == '[') {
            if (line.back() != ']') throw ConfigError("unterminated section header", lineno);
            section = trim(line.substr(1, line.size() - 2));
            if (!sections.count(section))
                throw ConfigError("unknown section '" + section + "'", lineno);
            continue;
        }

        std::size_t eq = line.find('=');
        if (eq == std::string::npos) throw ConfigError("expected key = value", lineno);
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        if (section.empty()) throw ConfigError("key outside any section", lineno);
        std::string full = section + "." + key;
        if (seen.count(full)) throw ConfigError("duplicate key '" + full + "'", lineno);
        seen.insert(full);

        if (full == "manifold.n") cfg.n = parse_int(value, lineno);
        else if (full == "manifold.points_per_axis") cfg.points_per_axis = parse_int(value, lineno);
        else if (full == "problem.p") cfg.p = parse_double(value, lineno);
        else if (full == "problem.h") cfg.h = parse_double(value, lineno);
        else if (full == "problem.f") cfg.f_expr = value;
        else if (full == "problem.a") cfg.a_expr = value;
        else if (full == "solver.tol_grad") cfg.tol_grad = parse_double(value, lineno);
        else if (full == "solver.tol_energy") cfg.tol_energy = parse_double(value, lineno);
        else if (full == "solver.max_iters") cfg.max_iters = parse_int(value, lineno);
        else if (full == "solver.seed") cfg.seed = static_cast<std::uint64_t>(parse_double(value, lineno));
        else if (full == "solver.eta0") cfg.eta0 = parse_double(value, lineno);
        else if (full == "solver.eps0") cfg.eps0 = parse_double(value, lineno);
        else if (full == "solver.stages") cfg.stages = parse_int(value, lineno);
        else if (full == "solver.q_start") cfg.q_start = parse_double(value, lineno);
        else if (full == "solver.delta_reg") cfg.delta_reg = parse_double(value, lineno);
        else if (full == "solver.tol_residual") cfg.tol_residual = parse_double(value, lineno);
        else if (full == "solver.path_nodes") cfg.path_nodes = parse_int(value, lineno);
        else if (full == "scenario.name") cfg.scenario = value;
        else if (full == "scenario.k_min") cfg.k_min = parse_double(value, lineno);
        else if (full == "scenario.k_max") cfg.k_max = parse_double(value, lineno);
        else if (full == "scenario.k_samples") cfg.k_samples = parse_int(value, lineno);
        else if (full == "scenario.eta_list") cfg.eta_list = parse_list(value, lineno);
        else if (full == "scenario.q") cfg.q = parse_double(value, lineno);
        else if (full == "scenario.eps") cfg.eps = parse_double(value, lineno);
        else if (full == "scenario.k") cfg.k = parse_double(value, lineno);
        else if (full == "scenario.rel_step") cfg.rel_step = parse_double(value, lineno);
        else if (full == "scenario.Lambda") cfg.Lambda = parse_double(value, lineno);
        else if (full == "scenario.mu_hat") cfg.mu_hat = parse_double(value, lineno);
        else if (full == "scenario.k_starstar") cfg.k_starstar = parse_double(value, lineno);
        else if (full == "scenario.delta") cfg.delta = parse_double(value, lineno);
        else if (full == "scenario.k_star") cfg.k_star = parse_double(value, lineno);
        else if (full == "scenario.band_hi") cfg.band_hi = parse_double(value, lineno);
        else if (full == "output.directory") cfg.directory = value;
        else if (full == "output.formats") cfg.formats = parse_words(value);
        else throw ConfigError("unknown key '" + full + "'", lineno);
    }

    // Range validation.
    if (cfg.n < 2 || cfg.n > 3) throw ConfigError("manifold.n must be 2 or 3");
    if (cfg.points_per_axis < 4) throw ConfigError("manifold.points_per_axis must be >= 4");
    if (!(cfg.p > 1.0 && cfg.p < cfg.n))
        throw ConfigError("problem.p out of range: requires 1 < p < n");
    if (!(cfg.h < 0.0)) throw ConfigError("problem.h must be negative");
    if (cfg.f_expr.empty()) throw ConfigError("problem.f is required");
    if (cfg.a_expr.empty()) throw ConfigError("problem.a is required");
    if (cfg.scenario.empty()) throw ConfigError("scenario.name is required");
    const std::set<std::string> scen = {"landscape", "eigen", "thresholds",
                                        "solve", "nonexist", "continuity"};
    if (!scen.count(cfg.scenario))
        throw ConfigError("unknown scenario '" + cfg.scenario + "'");
    if (cfg.stages < 1) throw ConfigError("solver.stages must be >= 1");
    if (!(cfg.eta0 > 0.0 && cfg.eta0 < 2.0)) throw ConfigError("solver.eta0 must lie in (0, 2)");
    if (cfg.k_samples < 1) throw ConfigError("scenario.k_samples must be >= 1");
    return cfg;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config_text(ss.str());
}

std::string print_config(const RunConfig& c) {
    std::string out;
    auto kv = [&out](const std::string& k, const std::string& v) { out += k + " = " + v + "\n"; };
    out += "[manifold]\n";
    kv("n", std::to_string(c.n));
    kv("points_per_axis", std::to_string(c.points_per_axis));
    out += "[problem]\n";
    kv("p", fmt17(c.p));
    kv("h", fmt17(c.h));
    kv("f", c.f_expr);
    kv("a", c.a_expr);
    out += "[solver]\n";
    kv("tol_grad", fmt17(c.tol_grad));
    kv("tol_energy", fmt17(c.tol_energy));
    kv("max_iters", std::to_string(c.max_iters));
    kv("seed", std::to_string(c.seed));
    kv("eta0", fmt17(c.eta0));
    kv("eps0", fmt17(c.eps0));
    kv("stages", std::to_string(c.stages));
    kv("q_start", fmt17(c.q_start));
    kv("delta_reg", fmt17(c.delta_reg));
    kv("tol_residual", fmt17(c.tol_residual));
    kv("path_nodes", std::to_string(c.path_nodes));
    out += "[scenario]\n";
    kv("name", c.scenario);
    kv("k_min", fmt17(c.k_min));
    kv("k_max", fmt17(c.k_max));
    kv("k_samples", std::to_string(c.k_samples));
    if (!c.eta_list.empty()) {
        std::string l;
        for (std::size_t i = 0; i < c.eta_list.size(); ++i)
            l += (i ? ", " : "") + fmt17(c.eta_list[i]);
        kv("eta_list", l);
    }
    kv("q", fmt17(c.q));
    kv("eps", fmt17(c.eps));
    kv("k", fmt17(c.k));
    kv("rel_step", fmt17(c.rel_step));
    kv("Lambda", fmt17(c.Lambda));
    kv("mu_hat", fmt17(c.mu_hat));
    kv("k_starstar", fmt17(c.k_starstar));
    kv("delta", fmt17(c.delta));
    kv("k_star", fmt17(c.k_star));
    kv("band_hi", fmt17(c.band_hi));
    out += "[output]\n";
    kv("directory", c.directory);
    {
        std::string l;
        for (std::size_t i = 0; i < c.formats.size(); ++i) l += (i ? ", " : "") + c.formats[i];
        kv("formats", l);
    }
    return out;
}

}  // namespace lich
