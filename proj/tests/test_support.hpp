#pragma once

// Shared oracles for the test suites. Everything here is implemented
// independently of the library code paths it checks: plain loops, naive
// summation, bisection, dense linear algebra.

#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

#include "lich/grid.hpp"
#include "lich/problem.hpp"

namespace lich::test {

/// Straight-line re-implementation of the regularized energy by naive
/// summation with explicit modular indexing.
inline double naive_energy(const ScalarField& u, const ProblemData& prob, double q, double eps,
                           double delta_reg) {
    const TorusGrid& g = u.grid();
    const int N = g.points_per_axis();
    const double hspace = 1.0 / N;
    const double w = std::pow(hspace, g.dim());
    double kin = 0.0, mass = 0.0, fterm = 0.0, aterm = 0.0;

    auto at = [&](int i, int j, int k) {
        std::array<int, 3> c{((i % N) + N) % N, ((j % N) + N) % N, ((k % N) + N) % N};
        return u[g.index(c)];
    };
    const int Kmax = g.dim() == 3 ? N : 1;
    for (int k = 0; k < Kmax; ++k)
        for (int j = 0; j < N; ++j)
            for (int i = 0; i < N; ++i) {
                double uc = at(i, j, k);
                double gx = (at(i + 1, j, k) - uc) / hspace;
                double gy = (at(i, j + 1, k) - uc) / hspace;
                double gz = g.dim() == 3 ? (at(i, j, k + 1) - uc) / hspace : 0.0;
                double mag2 = gx * gx + gy * gy + gz * gz + delta_reg * delta_reg;
                kin += std::pow(std::sqrt(mag2), prob.p);
                mass += std::pow(std::abs(uc), prob.p);
                std::array<int, 3> c{i, j, k};
                std::int64_t idx = g.index(c);
                fterm += prob.f[idx] * std::pow(std::abs(uc), q);
                aterm += prob.a[idx] / std::pow(uc * uc + eps, 0.5 * q);
            }
    return w * (kin / prob.p + prob.h / prob.p * mass - fterm / q + aterm / q);
}

/// Bisection root of g(u) = h u^(p-1) - f0 u^(q-1) - a0 u (u^2+eps)^(-q/2-1)
/// on (0, inf); this is the constant critical point of the stage energy.
inline double constant_critical_root(double p, double q, double eps, double h, double f0,
                                     double a0) {
    auto g = [&](double u) {
        return h * std::pow(u, p - 1.0) - f0 * std::pow(u, q - 1.0) -
               a0 * u / std::pow(u * u + eps, 0.5 * q + 1.0);
    };
    double lo = 1e-9, hi = 1.0;
    while (g(hi) < 0.0) {
        hi *= 2.0;
        if (hi > 1e12) throw std::runtime_error("constant_critical_root: no sign change");
    }
    if (g(lo) > 0.0) throw std::runtime_error("constant_critical_root: bad lower end");
    for (int it = 0; it < 400; ++it) {
        double mid = 0.5 * (lo + hi);
        (g(mid) < 0.0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

/// Smallest eigenvalue of a dense symmetric matrix via cyclic Jacobi.
inline double jacobi_smallest_eigenvalue(std::vector<std::vector<double>> a) {
    const std::size_t n = a.size();
    for (int sweep = 0; sweep < 200; ++sweep) {
        double off = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j) off += a[i][j] * a[i][j];
        if (off < 1e-24) break;
        for (std::size_t pq = 0; pq < n; ++pq)
            for (std::size_t r = pq + 1; r < n; ++r) {
                double apq = a[pq][r];
                if (std::abs(apq) < 1e-300) continue;
                double theta = 0.5 * (a[r][r] - a[pq][pq]) / apq;
                double t = (theta >= 0 ? 1.0 : -1.0) /
                           (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                double c = 1.0 / std::sqrt(t * t + 1.0), s = t * c;
                for (std::size_t k = 0; k < n; ++k) {
                    double akp = a[k][pq], akq = a[k][r];
                    a[k][pq] = c * akp - s * akq;
                    a[k][r] = s * akp + c * akq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    double apk = a[pq][k], aqk = a[r][k];
                    a[pq][k] = c * apk - s * aqk;
                    a[r][k] = s * apk + c * aqk;
                }
            }
    }
    double lo = a[0][0];
    for (std::size_t i = 1; i < n; ++i) lo = std::min(lo, a[i][i]);
    return lo;
}

/// Euclidean Sobolev ratio ||u||_{p*} / ||grad u||_p of the radial profile
/// u(r) = (1 + lambda r^(p/(p-1)))^(-(n-p)/p), by log-substitution trapezoid
/// quadrature over r in (0, inf).
inline double radial_bubble_ratio(int n, double p, double lambda) {
    const double p_star = n * p / (n - p);
    const double alpha = p / (p - 1.0);
    const double beta = (n - p) / p;
    auto u_of = [&](double r) { return std::pow(1.0 + lambda * std::pow(r, alpha), -beta); };
    auto du_of = [&](double r) {
        return -beta * std::pow(1.0 + lambda * std::pow(r, alpha), -beta - 1.0) * lambda *
               alpha * std::pow(r, alpha - 1.0);
    };
    // r = e^t, dr = e^t dt; integrands times r^(n-1).
    const double t_lo = -30.0, t_hi = 30.0;
    const int m = 6000;
    double num = 0.0, den = 0.0;
    for (int i = 0; i <= m; ++i) {
        double t = t_lo + (t_hi - t_lo) * i / m;
        double r = std::exp(t);
        double wgt = (i == 0 || i == m) ? 0.5 : 1.0;
        num += wgt * std::pow(u_of(r), p_star) * std::pow(r, n - 1.0) * r;
        den += wgt * std::pow(std::abs(du_of(r)), p) * std::pow(r, n - 1.0) * r;
    }
    // The surface measure of the unit sphere cancels in the ratio except for
    // the exponents 1/p* and 1/p.
    double omega = 2.0 * std::pow(M_PI, 0.5 * n) / std::tgamma(0.5 * n);
    double step = (t_hi - t_lo) / m;
    num *= omega * step;
    den *= omega * step;
    return std::pow(num, 1.0 / p_star) / std::pow(den, 1.0 / p);
}

}  // namespace lich::test
