#pragma once

#include <string>
#include <vector>

#include "lich/config.hpp"
#include "lich/grid.hpp"

namespace lich {

/// Exit-code contract of the scenario runner.
enum ExitCode : int {
    exit_ok = 0,
    exit_gate_failed = 2,
    exit_nonconvergence = 3,
    exit_config_error = 4,
};

/// Full-precision decimal formatting shared by every emitted report.
std::string format_float(double v);

/// Simple polyline plot with axes; x switches to log scale automatically for
/// wide positive ranges. Returns a self-contained SVG document.
std::string svg_polyline(const std::vector<std::pair<double, double>>& pts,
                         const std::string& x_label, const std::string& y_label);

/// Writes values as a flat little-endian float64 array plus a text header
/// describing the layout.
void write_field(const std::string& path_base, const ScalarField& u);

/// Runs the configured scenario, writing reports under out_dir (falls back to
/// the config's output.directory). Returns an ExitCode value.
int run_scenario(const RunConfig& cfg, const std::string& out_dir = "",
                 std::uint64_t seed_override = 0, bool has_seed_override = false);

}  // namespace lich
