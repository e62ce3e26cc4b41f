#pragma once

#include <vector>

namespace lrd {

/// Uniform evaluation grid on [0,1] with trapezoidal quadrature weights.
/// Weights are delta/2 at the endpoints and delta inside (delta = 1/(W-1)),
/// so they sum to one and inner products approximate integrals over [0,1].
struct Grid {
    std::vector<double> points;
    std::vector<double> weights;

    int size() const { return static_cast<int>(points.size()); }
};

/// Builds the uniform W-point grid (W >= 2, endpoints included).
Grid uniform_grid(int W);

/// Validates the Grid invariants (monotone points, weights summing to 1).
void validate_grid(const Grid& grid);

bool same_grid(const Grid& a, const Grid& b, double tol = 1e-12);

}  // namespace lrd
