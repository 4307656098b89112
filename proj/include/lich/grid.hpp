#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

namespace lich {

/// Uniform periodic grid over the unit-volume flat torus [0,1)^n.
///
/// Nodes sit at cell centers (i + 0.5) / points_per_axis, so the quadrature
/// weights are all equal to spacing^dim and sum to exactly 1.
class TorusGrid {
public:
    TorusGrid(int dim, int points_per_axis);

    int dim() const { return dim_; }
    int points_per_axis() const { return npts_; }
    double spacing() const { return spacing_; }
    double cell_weight() const { return cell_weight_; }
    std::int64_t size() const { return size_; }

    /// Cell-center coordinate along one axis.
    double coord(int i) const { return (i + 0.5) * spacing_; }

    /// Flat index from per-axis indices (wrapped modulo points_per_axis).
    std::int64_t index(std::array<int, 3> c) const;
    std::array<int, 3> coords(std::int64_t idx) const;

    /// Periodic neighbor along `axis`, displaced by `delta` cells.
    std::int64_t shift(std::int64_t idx, int axis, int delta) const;

    bool operator==(const TorusGrid& o) const {
        return dim_ == o.dim_ && npts_ == o.npts_;
    }

private:
    int dim_ = 0;
    int npts_ = 0;
    double spacing_ = 0.0;
    double cell_weight_ = 0.0;
    std::int64_t size_ = 0;
    std::array<std::int64_t, 3> stride_{};
};

/// One real value per grid node.
class ScalarField {
public:
    explicit ScalarField(const TorusGrid& grid, double fill = 0.0)
        : grid_(grid), v_(static_cast<std::size_t>(grid.size()), fill) {}

    const TorusGrid& grid() const { return grid_; }
    double& operator[](std::int64_t i) { return v_[static_cast<std::size_t>(i)]; }
    double operator[](std::int64_t i) const { return v_[static_cast<std::size_t>(i)]; }
    std::span<double> values() { return v_; }
    std::span<const double> values() const { return v_; }
    std::int64_t size() const { return grid_.size(); }

    bool all_finite() const;
    double min_value() const;
    double max_value() const;

private:
    TorusGrid grid_;
    std::vector<double> v_;
};

/// One real n-vector per node, component-major per node.
class VectorField {
public:
    explicit VectorField(const TorusGrid& grid)
        : grid_(grid), v_(static_cast<std::size_t>(grid.size()) * grid.dim(), 0.0) {}

    const TorusGrid& grid() const { return grid_; }
    double& at(std::int64_t node, int axis) {
        return v_[static_cast<std::size_t>(node) * grid_.dim() + axis];
    }
    double at(std::int64_t node, int axis) const {
        return v_[static_cast<std::size_t>(node) * grid_.dim() + axis];
    }
    std::span<double> values() { return v_; }
    std::span<const double> values() const { return v_; }

private:
    TorusGrid grid_;
    std::vector<double> v_;
};

/// Deterministic pairwise-tree reduction; run-to-run reproducible and more
/// accurate than naive left-to-right accumulation.
double pairwise_sum(std::span<const double> x);

}  // namespace lich
