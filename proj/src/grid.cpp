#include "lich/grid.hpp"

#include <cmath>
#include <stdexcept>

namespace lich {

TorusGrid::TorusGrid(int dim, int points_per_axis) : dim_(dim), npts_(points_per_axis) {
    if (dim < 2 || dim > 3)
        throw std::invalid_argument("TorusGrid: dimension must be 2 or 3");
    if (points_per_axis < 4)
        throw std::invalid_argument("TorusGrid: need at least 4 points per axis");
    spacing_ = 1.0 / npts_;
    size_ = 1;
    for (int d = 0; d < dim_; ++d) {
        stride_[d] = size_;
        size_ *= npts_;
    }
    cell_weight_ = 1.0;
    for (int d = 0; d < dim_; ++d) cell_weight_ *= spacing_;
}

std::int64_t TorusGrid::index(std::array<int, 3> c) const {
    std::int64_t idx = 0;
    for (int d = 0; d < dim_; ++d) {
        int w = c[d] % npts_;
        if (w < 0) w += npts_;
        idx += stride_[d] * w;
    }
    return idx;
}

std::array<int, 3> TorusGrid::coords(std::int64_t idx) const {
    std::array<int, 3> c{0, 0, 0};
    for (int d = 0; d < dim_; ++d) {
        c[d] = static_cast<int>(idx % npts_);
        idx /= npts_;
    }
    return c;
}

std::int64_t TorusGrid::shift(std::int64_t idx, int axis, int delta) const {
    std::int64_t s = stride_[axis];
    int i = static_cast<int>((idx / s) % npts_);
    int j = (i + delta) % npts_;
    if (j < 0) j += npts_;
    return idx + static_cast<std::int64_t>(j - i) * s;
}

bool ScalarField::all_finite() const {
    for (double x : v_)
        if (!std::isfinite(x)) return false;
    return true;
}

double ScalarField::min_value() const {
    double m = v_.empty() ? 0.0 : v_[0];
    for (double x : v_) m = std::min(m, x);
    return m;
}

double ScalarField::max_value() const {
    double m = v_.empty() ? 0.0 : v_[0];
    for (double x : v_) m = std::max(m, x);
    return m;
}

double pairwise_sum(std::span<const double> x) {
    if (x.size() <= 16) {
        double s = 0.0;
        for (double v : x) s += v;
        return s;
    }
    std::size_t half = x.size() / 2;
    return pairwise_sum(x.subspan(0, half)) + pairwise_sum(x.subspan(half));
}

}  // namespace lich
