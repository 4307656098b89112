#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace lich {

class ConfigError : public std::runtime_error {
public:
    ConfigError(std::string msg, int line = 0)
        : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + msg : msg),
          line_(line) {}
    int line() const { return line_; }

private:
    int line_;
};

/// Parsed run configuration: plain-text sections of key = value lines,
/// '#' comments, unknown keys are hard errors.
struct RunConfig {
    // [manifold]
    int n = 3;
    int points_per_axis = 12;

    // [problem]
    double p = 2.0;
    double h = -1.0;
    std::string f_expr;
    std::string a_expr;

    // [solver]
    double tol_grad = 1e-8;
    double tol_energy = 1e-12;
    int max_iters = 20000;
    std::uint64_t seed = 1;
    double eta0 = 0.5;
    double eps0 = 0.1;
    int stages = 8;
    double q_start = 0.0;    // 0 = midpoint default
    double delta_reg = -1.0; // <0 = automatic
    double tol_residual = 1e-6;
    int path_nodes = 17;

    // [scenario]
    std::string scenario;    // landscape | eigen | thresholds | solve | nonexist | continuity
    double k_min = 0.0;      // landscape window; 0 = auto
    double k_max = 0.0;
    int k_samples = 20;
    std::vector<double> eta_list;
    double q = 0.0;          // 0 = schedule default for single-(q,eps) scenarios
    double eps = 1e-3;
    double k = 0.0;          // continuity probe center
    double rel_step = 1e-3;
    double Lambda = 0.0;     // nonexist: 0 = derive from mu_hat/k_starstar
    double mu_hat = 1.0;
    double k_starstar = 2.0;
    double delta = 0.0;      // eta_scan slack; 0 = auto
    double k_star = 0.0;     // pipeline band lower edge override
    double band_hi = 0.0;    // pipeline band upper edge override

    // [output]
    std::string directory = "out";
    std::vector<std::string> formats = {"csv", "svg"};
};

RunConfig load_config(const std::string& path);
RunConfig parse_config_text(const std::string& text);

/// Round-trip printer: emits every key in canonical section order.
std::string print_config(const RunConfig& cfg);

}  // namespace lich
