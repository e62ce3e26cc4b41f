#include "lrd/grid.hpp"

#include <cmath>
#include <stdexcept>

namespace lrd {

Grid uniform_grid(int W) {
    if (W < 2) throw std::invalid_argument("uniform_grid: need at least 2 grid points");
    Grid g;
    g.points.resize(W);
    g.weights.resize(W);
    const double delta = 1.0 / (W - 1);
    for (int i = 0; i < W; ++i) {
        g.points[i] = static_cast<double>(i) * delta;
        g.weights[i] = (i == 0 || i == W - 1) ? delta / 2.0 : delta;
    }
    g.points.back() = 1.0;
    return g;
}

void validate_grid(const Grid& grid) {
    const int W = grid.size();
    if (W < 2) throw std::invalid_argument("grid: need at least 2 points");
    if (static_cast<int>(grid.weights.size()) != W)
        throw std::invalid_argument("grid: points/weights length mismatch");
    double sum = 0.0;
    for (int i = 0; i < W; ++i) {
        if (!std::isfinite(grid.points[i]) || !std::isfinite(grid.weights[i]))
            throw std::invalid_argument("grid: non-finite entry");
        if (i > 0 && grid.points[i] <= grid.points[i - 1])
            throw std::invalid_argument("grid: points must be strictly increasing");
        sum += grid.weights[i];
    }
    if (std::abs(sum - 1.0) > 1e-12)
        throw std::invalid_argument("grid: quadrature weights must sum to 1");
}

bool same_grid(const Grid& a, const Grid& b, double tol) {
    if (a.size() != b.size()) return false;
    for (int i = 0; i < a.size(); ++i) {
        if (std::abs(a.points[i] - b.points[i]) > tol) return false;
        if (std::abs(a.weights[i] - b.weights[i]) > tol) return false;
    }
    return true;
}

}  // namespace lrd
