#include "lich/operators.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace lich {

double integrate(const ScalarField& f) {
    return f.grid().cell_weight() * pairwise_sum(f.values());
}

double lp_norm(const ScalarField& f, double r) {
    if (r < 1.0) throw std::invalid_argument("lp_norm: r must be >= 1");
    const auto v = f.values();
    std::vector<double> w(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) w[i] = std::pow(std::abs(v[i]), r);
    double s = f.grid().cell_weight() * pairwise_sum(w);
    return std::pow(s, 1.0 / r);
}

VectorField grad(const ScalarField& u) {
    const TorusGrid& g = u.grid();
    VectorField out(g);
    const double inv_h = 1.0 / g.spacing();
    for (std::int64_t i = 0; i < g.size(); ++i) {
        for (int d = 0; d < g.dim(); ++d) {
            out.at(i, d) = (u[g.shift(i, d, +1)] - u[i]) * inv_h;
        }
    }
    return out;
}

ScalarField divergence(const VectorField& w) {
    const TorusGrid& g = w.grid();
    ScalarField out(g);
    const double inv_h = 1.0 / g.spacing();
    for (std::int64_t i = 0; i < g.size(); ++i) {
        double s = 0.0;
        for (int d = 0; d < g.dim(); ++d) {
            s += (w.at(i, d) - w.at(g.shift(i, d, -1), d)) * inv_h;
        }
        out[i] = s;
    }
    return out;
}

double grad_norm_reg(const VectorField& g, std::int64_t node, double delta_reg) {
    double s = delta_reg * delta_reg;
    for (int d = 0; d < g.grid().dim(); ++d) {
        double c = g.at(node, d);
        s += c * c;
    }
    return std::sqrt(s);
}

double default_delta_reg(double p) { return p < 2.0 ? 1e-10 : 0.0; }

namespace {

/// |X|_reg^(p-2) X per node; zero flux where the regularized magnitude is 0.
VectorField p_flux(const ScalarField& u, double p, double delta_reg) {
    if (p <= 1.0) throw std::invalid_argument("p_laplacian: degenerate input, p must exceed 1");
    VectorField gu = grad(u);
    const TorusGrid& g = u.grid();
    for (std::int64_t i = 0; i < g.size(); ++i) {
        double mag = grad_norm_reg(gu, i, delta_reg);
        double scale = (mag == 0.0) ? 0.0 : std::pow(mag, p - 2.0);
        for (int d = 0; d < g.dim(); ++d) gu.at(i, d) *= scale;
    }
    return gu;
}

}  // namespace

ScalarField p_laplacian(const ScalarField& u, double p, double delta_reg) {
    ScalarField out = divergence(p_flux(u, p, delta_reg));
    for (std::int64_t i = 0; i < out.size(); ++i) out[i] = -out[i];
    return out;
}

double weak_pairing(const ScalarField& u, const ScalarField& v, double p, double delta_reg) {
    if (!(u.grid() == v.grid())) throw std::invalid_argument("weak_pairing: grid mismatch");
    VectorField f = p_flux(u, p, delta_reg);
    VectorField gv = grad(v);
    const TorusGrid& g = u.grid();
    std::vector<double> acc(static_cast<std::size_t>(g.size()));
    for (std::int64_t i = 0; i < g.size(); ++i) {
        double s = 0.0;
        for (int d = 0; d < g.dim(); ++d) s += f.at(i, d) * gv.at(i, d);
        acc[static_cast<std::size_t>(i)] = s;
    }
    return g.cell_weight() * pairwise_sum(acc);
}

double inner(const ScalarField& a, const ScalarField& b) {
    std::vector<double> acc(static_cast<std::size_t>(a.size()));
    for (std::int64_t i = 0; i < a.size(); ++i)
        acc[static_cast<std::size_t>(i)] = a[i] * b[i];
    return a.grid().cell_weight() * pairwise_sum(acc);
}

double grad_energy(const ScalarField& u, double p, double delta_reg) {
    VectorField gu = grad(u);
    const TorusGrid& g = u.grid();
    std::vector<double> acc(static_cast<std::size_t>(g.size()));
    for (std::int64_t i = 0; i < g.size(); ++i)
        acc[static_cast<std::size_t>(i)] = std::pow(grad_norm_reg(gu, i, delta_reg), p);
    return g.cell_weight() * pairwise_sum(acc);
}

}  // namespace lich
