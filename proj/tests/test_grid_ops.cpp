#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "lich/grid.hpp"
#include "lich/operators.hpp"
#include "lich/rng.hpp"

using namespace lich;

TEST_CASE("quadrature weights sum to exactly one") {
    for (int n : {2, 3}) {
        for (int pts : {4, 12, 16}) {
            TorusGrid g(n, pts);
            ScalarField one(g, 1.0);
            CHECK(integrate(one) == doctest::Approx(1.0).epsilon(1e-15));
            ScalarField c(g, -3.25);
            CHECK(integrate(c) == doctest::Approx(-3.25).epsilon(1e-15));
        }
    }
}

TEST_CASE("integrate kills a full sine period to machine precision") {
    TorusGrid g(2, 16);
    ScalarField u(g);
    for (std::int64_t i = 0; i < g.size(); ++i)
        u[i] = std::sin(2.0 * M_PI * g.coord(g.coords(i)[0]));
    CHECK(std::abs(integrate(u)) < 1e-15);
}

TEST_CASE("lp_norm basics") {
    TorusGrid g(3, 8);
    CHECK(lp_norm(ScalarField(g, 2.0), 3.0) == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(lp_norm(ScalarField(g), 2.5) == 0.0);

    ScalarField pm(g);
    for (std::int64_t i = 0; i < g.size(); ++i) pm[i] = (i % 2 == 0) ? 1.0 : -1.0;
    CHECK(lp_norm(pm, 2.0) == doctest::Approx(1.0).epsilon(1e-14));

    ScalarField u = random_rough_field(g, 7);
    double c = -2.7;
    ScalarField cu = u;
    for (std::int64_t i = 0; i < g.size(); ++i) cu[i] *= c;
    for (double r : {1.0, 2.0, 3.5})
        CHECK(lp_norm(cu, r) == doctest::Approx(std::abs(c) * lp_norm(u, r)).epsilon(1e-13));
}

TEST_CASE("gradient of a constant vanishes; sine gradient converges") {
    TorusGrid g(2, 64);
    ScalarField c(g, 4.2);
    VectorField gc = grad(c);
    for (std::int64_t i = 0; i < g.size(); ++i)
        for (int d = 0; d < 2; ++d) CHECK(gc.at(i, d) == 0.0);

    ScalarField u(g);
    for (std::int64_t i = 0; i < g.size(); ++i)
        u[i] = std::sin(2.0 * M_PI * g.coord(g.coords(i)[0]));
    VectorField gu = grad(u);
    double max_err = 0.0;
    for (std::int64_t i = 0; i < g.size(); ++i) {
        double x = g.coord(g.coords(i)[0]);
        max_err = std::max(max_err, std::abs(gu.at(i, 0) - 2.0 * M_PI * std::cos(2.0 * M_PI * x)));
        CHECK(gu.at(i, 1) == 0.0);
    }
    // forward differences: first-order in the spacing
    CHECK(max_err < 4.0 * M_PI * M_PI * g.spacing());
}

TEST_CASE("sawtooth gradient is 1 except at the wrap column") {
    TorusGrid g(2, 8);
    const int N = g.points_per_axis();
    ScalarField u(g);
    for (std::int64_t i = 0; i < g.size(); ++i)
        u[i] = static_cast<double>(g.coords(i)[0]) / N;
    VectorField gu = grad(u);
    for (std::int64_t i = 0; i < g.size(); ++i) {
        if (g.coords(i)[0] == N - 1)
            CHECK(gu.at(i, 0) == doctest::Approx(1.0 - N).epsilon(1e-13));
        else
            CHECK(gu.at(i, 0) == doctest::Approx(1.0).epsilon(1e-13));
    }
}

TEST_CASE("p=2 operator equals the directly assembled periodic Laplacian") {
    TorusGrid g(3, 8);
    ScalarField u = random_rough_field(g, 3);
    ScalarField lap = p_laplacian(u, 2.0, 0.0);
    const double h2 = g.spacing() * g.spacing();
    for (std::int64_t i = 0; i < g.size(); ++i) {
        double acc = 0.0;
        for (int d = 0; d < 3; ++d)
            acc += u[g.shift(i, d, +1)] - 2.0 * u[i] + u[g.shift(i, d, -1)];
        CHECK(lap[i] == doctest::Approx(-acc / h2).epsilon(1e-11));
    }
}

TEST_CASE("discrete duality: weak form equals strong form against test fields") {
    TorusGrid g(3, 8);
    for (double p : {1.5, 2.0, 3.0}) {
        double dreg = default_delta_reg(p);
        for (int trial = 0; trial < 10; ++trial) {
            ScalarField u = random_rough_field(g, 100 + trial);
            ScalarField v = random_rough_field(g, 200 + trial);
            double weak = weak_pairing(u, v, p, dreg);
            double strong = integrate([&] {
                ScalarField w = p_laplacian(u, p, dreg);
                for (std::int64_t i = 0; i < g.size(); ++i) w[i] *= v[i];
                return w;
            }());
            CHECK(std::abs(weak - strong) <=
                  1e-10 * (1.0 + std::abs(weak) + std::abs(strong)));
        }
    }
}

TEST_CASE("duality with v constant gives zero") {
    TorusGrid g(2, 8);
    ScalarField u = random_rough_field(g, 5);
    ScalarField v(g, 3.0);
    CHECK(std::abs(weak_pairing(u, v, 2.5, 0.0)) < 1e-12);
}

TEST_CASE("weak pairing of u with itself at p=2 is the gradient energy") {
    TorusGrid g(2, 12);
    ScalarField u = random_rough_field(g, 11);
    CHECK(weak_pairing(u, u, 2.0, 0.0) ==
          doctest::Approx(grad_energy(u, 2.0, 0.0)).epsilon(1e-12));
}

TEST_CASE("divergence theorem: p-laplacian integrates to zero") {
    TorusGrid g(3, 8);
    for (double p : {1.5, 2.0, 3.0}) {
        ScalarField u = random_rough_field(g, 42);
        CHECK(std::abs(integrate(p_laplacian(u, p, default_delta_reg(p)))) < 1e-12);
    }
}

TEST_CASE("operator monotonicity for p >= 2") {
    TorusGrid g(3, 8);
    for (double p : {2.0, 3.0, 4.0}) {
        for (int trial = 0; trial < 20; ++trial) {
            ScalarField u = random_rough_field(g, 300 + trial);
            ScalarField v = random_rough_field(g, 400 + trial);
            ScalarField du = p_laplacian(u, p, 0.0);
            ScalarField dv = p_laplacian(v, p, 0.0);
            ScalarField prod(g);
            for (std::int64_t i = 0; i < g.size(); ++i)
                prod[i] = (du[i] - dv[i]) * (u[i] - v[i]);
            CHECK(integrate(prod) >= -1e-12);
        }
    }
}

TEST_CASE("degenerate exponent is rejected") {
    TorusGrid g(2, 4);
    ScalarField u(g, 1.0);
    CHECK_THROWS(p_laplacian(u, 1.0, 0.0));
    CHECK_THROWS(lp_norm(u, 0.5));
}

TEST_CASE("periodic index arithmetic wraps on every axis") {
    TorusGrid g(3, 8);
    std::array<int, 3> c{7, 0, 3};
    std::int64_t i = g.index(c);
    CHECK(g.shift(i, 0, 1) == g.index({0, 0, 3}));
    CHECK(g.shift(i, 1, -1) == g.index({7, 7, 3}));
    CHECK(g.index({-1, 8, 3}) == g.index({7, 0, 3}));
}
