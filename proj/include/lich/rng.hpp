#pragma once

#include <cmath>
#include <cstdint>
#include <random>

#include "lich/grid.hpp"

namespace lich {

/// Uniform doubles in [0,1) built directly from mt19937_64 output words, so
/// streams are bit-identical across platforms and standard libraries.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    double uniform() {
        return static_cast<double>(eng_() >> 11) * 0x1.0p-53;
    }
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
    int uniform_int(int n) { return static_cast<int>(eng_() % static_cast<std::uint64_t>(n)); }

private:
    std::mt19937_64 eng_;
};

/// Smooth periodic field from a few random Fourier modes, values in [-1, 1]
/// scale. Deterministic in (seed, grid).
inline ScalarField random_smooth_field(const TorusGrid& grid, std::uint64_t seed,
                                       int modes = 4) {
    Rng rng(seed);
    ScalarField out(grid);
    const double two_pi = 2.0 * M_PI;
    for (int m = 0; m < modes; ++m) {
        int k[3] = {0, 0, 0};
        for (int d = 0; d < grid.dim(); ++d) k[d] = rng.uniform_int(3) - 1;
        if (k[0] == 0 && k[1] == 0 && k[2] == 0) k[0] = 1;
        double amp = rng.uniform(-1.0, 1.0) / modes;
        double phase = rng.uniform(0.0, two_pi);
        for (std::int64_t i = 0; i < grid.size(); ++i) {
            auto c = grid.coords(i);
            double arg = phase;
            for (int d = 0; d < grid.dim(); ++d) arg += two_pi * k[d] * grid.coord(c[d]);
            out[i] += amp * std::cos(arg);
        }
    }
    return out;
}

/// Per-node uniform noise in [-1, 1]; rough, for oracle and property tests.
inline ScalarField random_rough_field(const TorusGrid& grid, std::uint64_t seed) {
    Rng rng(seed);
    ScalarField out(grid);
    for (std::int64_t i = 0; i < grid.size(); ++i) out[i] = rng.uniform(-1.0, 1.0);
    return out;
}

}  // namespace lich
