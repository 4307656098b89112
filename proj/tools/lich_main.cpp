#include <cstdio>
#include <exception>
#include <string>

#include <CLI11.hpp>

#include "lich/config.hpp"
#include "lich/expr.hpp"
#include "lich/report.hpp"

int main(int argc, char** argv) {
    CLI::App app{"lich - numerical laboratory for a quasilinear Lichnerowicz-type equation "
                 "on the flat torus"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir;
    std::uint64_t seed = 0;
    bool has_seed = false;

    const char* names[] = {"landscape", "eigen", "thresholds", "solve", "nonexist",
                           "continuity"};
    const char* descs[] = {
        "sample the constrained energy landscape over a k-grid",
        "generalized first-eigenvalue scan over eta",
        "evaluate every closed-form constant and hypothesis clause",
        "run the gated solution pipeline(s)",
        "evaluate the non-existence criterion and a norm-capped solve",
        "probe the landscape's continuity in k",
    };
    std::string chosen;
    for (int i = 0; i < 6; ++i) {
        CLI::App* sub = app.add_subcommand(names[i], descs[i]);
        sub->add_option("--config", config_path, "path to the run configuration")->required();
        sub->add_option("--out", out_dir, "output directory (overrides the config)");
        sub->add_option("--seed", seed, "seed override")->each([&has_seed](const std::string&) {
            has_seed = true;
        });
        sub->callback([&chosen, name = std::string(names[i])] { chosen = name; });
    }

    CLI11_PARSE(app, argc, argv);

    try {
        lich::RunConfig cfg = lich::load_config(config_path);
        if (cfg.scenario != chosen) {
            // The subcommand wins; the config supplies everything else.
            cfg.scenario = chosen;
        }
        int code = lich::run_scenario(cfg, out_dir, seed, has_seed);
        if (code == lich::exit_gate_failed)
            std::fprintf(stderr, "hypothesis gate failed (verdict report written)\n");
        else if (code == lich::exit_nonconvergence)
            std::fprintf(stderr, "non-convergence flagged (reports written)\n");
        return code;
    } catch (const lich::ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return lich::exit_config_error;
    } catch (const lich::ExprError& e) {
        if (e.offset() >= 0)
            std::fprintf(stderr, "expression error at offset %ld: %s\n", e.offset(), e.what());
        else
            std::fprintf(stderr, "expression error: %s\n", e.what());
        return lich::exit_config_error;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return lich::exit_config_error;
    }
}
